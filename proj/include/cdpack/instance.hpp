#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdpack/bitstring.hpp"
#include "cdpack/rng.hpp"

namespace cdpack {

/// Raised when an instance file is missing or violates the data model.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A one-dimensional packing instance: positive integer item weights and a
/// shared bin capacity. An item heavier than a bin can never be packed, so
/// such instances are rejected on construction.
class BppInstance {
 public:
  BppInstance(std::vector<long long> weights, long long capacity)
      : weights_(std::move(weights)), capacity_(capacity) {
    if (weights_.empty()) throw InstanceError("instance needs at least one item");
    if (capacity_ < 1) throw InstanceError("capacity must be a positive integer");
    for (long long w : weights_) {
      if (w < 1) throw InstanceError("item weights must be positive integers");
      if (w > capacity_) throw InstanceError("item weight exceeds bin capacity");
    }
    if (weights_.size() > 64) throw InstanceError("at most 64 items supported");
  }

  int num_items() const { return static_cast<int>(weights_.size()); }
  long long capacity() const { return capacity_; }
  const std::vector<long long>& weights() const { return weights_; }
  long long weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }

  long long total_weight() const {
    long long sum = 0;
    for (long long w : weights_) sum += w;
    return sum;
  }

  /// Total weight of the subset selected by `bits` (item 0 = most
  /// significant rendered bit).
  long long subset_weight(std::uint64_t bits) const {
    const int n = num_items();
    long long sum = 0;
    for (int i = 0; i < n; ++i)
      if ((bits >> (n - 1 - i)) & 1) sum += weights_[static_cast<std::size_t>(i)];
    return sum;
  }

 private:
  std::vector<long long> weights_;
  long long capacity_;
};

inline nlohmann::json instance_to_json(const BppInstance& inst) {
  return nlohmann::json{{"capacity", inst.capacity()}, {"weights", inst.weights()}};
}

inline BppInstance instance_from_json(const nlohmann::json& j) {
  try {
    return BppInstance(j.at("weights").get<std::vector<long long>>(),
                       j.at("capacity").get<long long>());
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("bad instance JSON: ") + e.what());
  }
}

/// CSV form: header line `capacity,<int>`, then one weight per line.
inline BppInstance instance_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InstanceError("empty instance CSV");
  const auto comma = line.find(',');
  if (line.rfind("capacity", 0) != 0 || comma == std::string::npos)
    throw InstanceError("instance CSV must start with 'capacity,<int>'");
  long long capacity = 0;
  try {
    capacity = std::stoll(line.substr(comma + 1));
  } catch (const std::exception&) {
    throw InstanceError("bad capacity in instance CSV header");
  }
  std::vector<long long> weights;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      weights.push_back(std::stoll(line));
    } catch (const std::exception&) {
      throw InstanceError("bad weight line in instance CSV: " + line);
    }
  }
  return BppInstance(std::move(weights), capacity);
}

/// Loads JSON or CSV, deciding by leading '{' so either format works with
/// any file name.
inline BppInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InstanceError("empty instance file: " + path);
  if (text[first] == '{') {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InstanceError("invalid JSON in instance file: " + path);
    return instance_from_json(j);
  }
  std::istringstream csv(text);
  return instance_from_csv(csv);
}

inline void save_instance(const BppInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

/// Draws n integer weights uniformly from [lo, hi], seeded.
inline BppInstance generate_instance(int n, long long lo, long long hi, long long capacity,
                                     std::uint64_t seed) {
  if (n < 1) throw InstanceError("need at least one item");
  if (lo < 1 || lo > hi || hi > capacity)
    throw InstanceError("weight range must satisfy 1 <= lo <= hi <= capacity");
  rng::Stream stream(rng::derive(seed, 0x67656eULL));
  std::vector<long long> weights;
  weights.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) weights.push_back(stream.next_int(lo, hi));
  return BppInstance(std::move(weights), capacity);
}

}  // namespace cdpack
