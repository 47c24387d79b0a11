#pragma once

#include "cachegap/system.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace cachegap {

// Packed bit string; bit i lives in byte i/8 at position i%8. Unused bits of
// the last byte stay zero so equality is semantic.
class BitString {
 public:
  BitString() = default;
  explicit BitString(size_t n_bits) : bytes_((n_bits + 7) / 8, 0), n_bits_(n_bits) {}

  static BitString random(size_t n_bits, std::mt19937_64& rng);

  size_t size() const { return n_bits_; }
  bool bit(size_t i) const;
  void set_bit(size_t i, bool v);
  BitString slice(size_t start, size_t len) const;
  void append(const BitString& other);
  BitString& operator^=(const BitString& other);  // sizes must match

  bool operator==(const BitString&) const = default;

  std::string to_hex() const;  // big-endian nibble dump, bit 0 first

 private:
  std::vector<uint8_t> bytes_;
  size_t n_bits_ = 0;
};

// All r-subsets of users {1..n_users} as bitmasks (bit k-1 = user k), in
// colexicographic order. For equal-size subsets colex order coincides with
// numeric order of the masks, which is how callers may rely on it.
// Requires 0 <= r <= n_users <= 30.
std::vector<uint32_t> subsets_in_colex(long n_users, long r);

struct FileLibrary {
  long n_files = 0;
  size_t bits_per_file = 0;
  std::vector<BitString> files;  // files[i] is file i+1

  static FileLibrary random(long n_files, size_t bits_per_file, uint64_t seed);
};

// One user's cache after placement: subfile (file f, subset T) is present
// exactly when the user belongs to T.
struct CacheContent {
  long user = 0;  // 1-based
  std::map<std::pair<long, uint32_t>, BitString> entries;

  size_t total_bits() const;
};

struct MulticastMessage {
  uint32_t subset = 0;  // the r+1 users this transmission serves
  BitString payload;
};

// Splits every file into C(K, r) equal subfiles indexed by the r-subsets in
// colex order and fills each cache. Requires integer r = K M / N in [0, K]
// and bits_per_file divisible by C(K, r).
std::vector<CacheContent> place(const FileLibrary& lib, const SystemParams& p);

// Lowest-indexed user per distinct requested file.
uint32_t leader_mask(const Demand& d);

// One XOR transmission per (r+1)-subset that touches a leader, in colex
// order: the payload XORs, over members k of the subset S, the subfile of
// user k's file indexed by S minus k.
std::vector<MulticastMessage> deliver(const FileLibrary& lib, const SystemParams& p,
                                      const Demand& d);

// Reconstructs the user's requested file from its cache plus the multicast
// transcript by solving the XOR system over GF(2). Throws std::logic_error
// if the transcript does not determine the file (a protocol bug, not an
// input error).
BitString decode(const SystemParams& p, const Demand& d, long user, const CacheContent& cache,
                 const std::vector<MulticastMessage>& messages);

struct MeasuredRates {
  Rational peak;       // max over demands of delivered bits / file bits
  Rational average;    // mean over all N^K demands
  unsigned long long demands = 0;
};

struct SimulationOutcome {
  MeasuredRates rates;
  bool all_decoded = true;          // meaningful when verify_decode
  bool load_identity_held = true;   // per-demand message count matched the formula
  std::string first_failure;
};

// Runs the scheme over every demand (guarded: N^K <= 10^6). With
// verify_decode, every user of every demand must reproduce its file
// bit-for-bit. bits_per_file = 0 picks the default 8 C(K, r).
SimulationOutcome simulate_all_demands(const SystemParams& p, size_t bits_per_file,
                                       uint64_t seed, bool verify_decode);

// Measured peak/average rates only (no decode pass).
MeasuredRates measured_rates(const SystemParams& p, size_t bits_per_file, uint64_t seed);

// Human-readable delivery transcript for one demand: one line per
// transmission, subset then payload hex, in send order.
std::string transcript(const FileLibrary& lib, const SystemParams& p, const Demand& d);

}  // namespace cachegap
