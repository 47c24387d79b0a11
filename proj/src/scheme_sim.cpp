#include "cachegap/scheme_sim.hpp"

#include "cachegap/combinatorics.hpp"
#include "cachegap/core_rates.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cachegap {

BitString BitString::random(size_t n_bits, std::mt19937_64& rng) {
  BitString out(n_bits);
  for (auto& b : out.bytes_) b = static_cast<uint8_t>(rng() & 0xFF);
  if (n_bits % 8) out.bytes_.back() &= static_cast<uint8_t>((1u << (n_bits % 8)) - 1);
  return out;
}

bool BitString::bit(size_t i) const {
  if (i >= n_bits_) throw std::out_of_range("BitString::bit");
  return (bytes_[i / 8] >> (i % 8)) & 1u;
}

void BitString::set_bit(size_t i, bool v) {
  if (i >= n_bits_) throw std::out_of_range("BitString::set_bit");
  if (v) bytes_[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  else bytes_[i / 8] &= static_cast<uint8_t>(~(1u << (i % 8)));
}

BitString BitString::slice(size_t start, size_t len) const {
  if (start + len > n_bits_) throw std::out_of_range("BitString::slice");
  BitString out(len);
  if (start % 8 == 0) {  // common case: aligned copy
    std::copy(bytes_.begin() + start / 8, bytes_.begin() + start / 8 + (len + 7) / 8,
              out.bytes_.begin());
    if (len % 8) out.bytes_.back() &= static_cast<uint8_t>((1u << (len % 8)) - 1);
  } else {
    for (size_t i = 0; i < len; ++i) out.set_bit(i, bit(start + i));
  }
  return out;
}

void BitString::append(const BitString& other) {
  size_t base = n_bits_;
  bytes_.resize((base + other.n_bits_ + 7) / 8, 0);
  n_bits_ = base + other.n_bits_;
  if (base % 8 == 0) {
    std::copy(other.bytes_.begin(), other.bytes_.end(), bytes_.begin() + base / 8);
  } else {
    for (size_t i = 0; i < other.n_bits_; ++i) set_bit(base + i, other.bit(i));
  }
}

BitString& BitString::operator^=(const BitString& other) {
  if (n_bits_ != other.n_bits_) throw std::invalid_argument("BitString: xor size mismatch");
  for (size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

std::string BitString::to_hex() const {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (uint8_t b : bytes_) {
    out.push_back(digits[b & 0xF]);
    out.push_back(digits[b >> 4]);
  }
  return out;
}

std::vector<uint32_t> subsets_in_colex(long n_users, long r) {
  if (n_users < 0 || n_users > 30) throw std::domain_error("subsets_in_colex: need 0 <= K <= 30");
  if (r < 0 || r > n_users) throw std::domain_error("subsets_in_colex: need 0 <= r <= K");
  std::vector<uint32_t> out;
  if (r == 0) {
    out.push_back(0);
    return out;
  }
  // For fixed popcount, ascending numeric order of masks is colex order.
  uint32_t v = (1u << r) - 1;
  const uint32_t limit = 1u << n_users;
  while (v < limit) {
    out.push_back(v);
    uint32_t t = v | (v - 1);  // Gosper's hack: next mask with same popcount
    v = (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctz(v) + 1));
  }
  return out;
}

FileLibrary FileLibrary::random(long n_files, size_t bits_per_file, uint64_t seed) {
  if (n_files < 1) throw std::domain_error("FileLibrary: need at least one file");
  if (bits_per_file == 0) throw std::domain_error("FileLibrary: empty files");
  FileLibrary lib;
  lib.n_files = n_files;
  lib.bits_per_file = bits_per_file;
  std::mt19937_64 rng(seed);
  for (long f = 0; f < n_files; ++f) lib.files.push_back(BitString::random(bits_per_file, rng));
  return lib;
}

size_t CacheContent::total_bits() const {
  size_t total = 0;
  for (const auto& [key, bits] : entries) total += bits.size();
  return total;
}

namespace {

long integer_budget(const SystemParams& p) {
  Rational r = p.r();
  if (denominator(r) != 1)
    throw std::domain_error("scheme: cache budget r = K M / N must be an integer");
  return numerator(r).convert_to<long>();
}

struct Layout {
  long r = 0;
  std::vector<uint32_t> subsets;            // r-subsets, colex
  std::map<uint32_t, size_t> subset_index;  // mask -> position
  size_t subfile_bits = 0;

  Layout(const SystemParams& p, size_t bits_per_file) {
    r = integer_budget(p);
    subsets = subsets_in_colex(p.n_users, r);
    for (size_t i = 0; i < subsets.size(); ++i) subset_index[subsets[i]] = i;
    if (bits_per_file % subsets.size() != 0)
      throw std::domain_error("scheme: file size must be divisible by the subfile count");
    subfile_bits = bits_per_file / subsets.size();
  }
};

std::vector<long> sorted_distinct_files(const Demand& d) {
  std::vector<long> files = d.requests;
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

void check_demand(const SystemParams& p, const Demand& d) {
  if (d.n_users() != p.n_users)
    throw std::domain_error("scheme: demand length must equal the user count");
  for (long f : d.requests)
    if (f < 1 || f > p.n_files) throw std::domain_error("scheme: demand asks for unknown file");
}

}  // namespace

std::vector<CacheContent> place(const FileLibrary& lib, const SystemParams& p) {
  if (lib.n_files != p.n_files)
    throw std::domain_error("place: library size does not match the system");
  Layout layout(p, lib.bits_per_file);

  std::vector<CacheContent> caches(p.n_users);
  for (long k = 1; k <= p.n_users; ++k) {
    CacheContent& cache = caches[k - 1];
    cache.user = k;
    const uint32_t user_bit = 1u << (k - 1);
    for (long f = 1; f <= p.n_files; ++f) {
      for (size_t i = 0; i < layout.subsets.size(); ++i) {
        if (layout.subsets[i] & user_bit)
          cache.entries[{f, layout.subsets[i]}] =
              lib.files[f - 1].slice(i * layout.subfile_bits, layout.subfile_bits);
      }
    }
  }
  return caches;
}

uint32_t leader_mask(const Demand& d) {
  uint32_t mask = 0;
  std::vector<long> seen;
  for (size_t k = 0; k < d.requests.size(); ++k) {
    if (std::find(seen.begin(), seen.end(), d.requests[k]) == seen.end()) {
      seen.push_back(d.requests[k]);
      mask |= 1u << k;
    }
  }
  return mask;
}

std::vector<MulticastMessage> deliver(const FileLibrary& lib, const SystemParams& p,
                                      const Demand& d) {
  if (lib.n_files != p.n_files)
    throw std::domain_error("deliver: library size does not match the system");
  check_demand(p, d);
  Layout layout(p, lib.bits_per_file);
  const uint32_t leaders = leader_mask(d);

  std::vector<MulticastMessage> messages;
  if (layout.r == p.n_users) return messages;  // everything is cached
  for (uint32_t group : subsets_in_colex(p.n_users, layout.r + 1)) {
    if (!(group & leaders)) continue;  // no leader on board, redundant group
    MulticastMessage msg;
    msg.subset = group;
    msg.payload = BitString(layout.subfile_bits);
    for (long k = 1; k <= p.n_users; ++k) {
      const uint32_t user_bit = 1u << (k - 1);
      if (!(group & user_bit)) continue;
      uint32_t rest = group & ~user_bit;
      size_t idx = layout.subset_index.at(rest);
      msg.payload ^= lib.files[d.requests[k - 1] - 1].slice(idx * layout.subfile_bits,
                                                            layout.subfile_bits);
    }
    messages.push_back(std::move(msg));
  }
  return messages;
}

BitString decode(const SystemParams& p, const Demand& d, long user, const CacheContent& cache,
                 const std::vector<MulticastMessage>& messages) {
  check_demand(p, d);
  if (user < 1 || user > p.n_users) throw std::domain_error("decode: no such user");
  if (cache.user != user) throw std::domain_error("decode: cache belongs to another user");

  // The cache fixes subfile sizes; reconstruct the layout from the system.
  Layout layout(p, [&] {
    // file size = subfile count * subfile width; recover width from any entry
    // or from the messages when the cache is empty (r = 0)
    if (!cache.entries.empty())
      return cache.entries.begin()->second.size() * subsets_in_colex(p.n_users, integer_budget(p)).size();
    if (!messages.empty()) return messages.front().payload.size();
    throw std::domain_error("decode: cannot infer file size from empty transcript and cache");
  }());

  const uint32_t user_bit = 1u << (user - 1);
  const std::vector<long> wanted_files = sorted_distinct_files(d);

  // unknowns: subfiles (f, T) with the user outside T, for requested files f
  std::map<std::pair<long, uint32_t>, size_t> unknown_index;
  std::vector<std::pair<long, uint32_t>> unknowns;
  for (long f : wanted_files) {
    for (uint32_t t : layout.subsets) {
      if (t & user_bit) continue;
      unknown_index[{f, t}] = unknowns.size();
      unknowns.push_back({f, t});
    }
  }

  const size_t cols = unknowns.size();
  const size_t words = (cols + 63) / 64;
  struct Row {
    std::vector<uint64_t> mask;
    BitString rhs;
  };
  std::vector<Row> rows;
  for (const auto& msg : messages) {
    Row row;
    row.mask.assign(words, 0);
    row.rhs = msg.payload;
    for (long k = 1; k <= p.n_users; ++k) {
      const uint32_t kbit = 1u << (k - 1);
      if (!(msg.subset & kbit)) continue;
      uint32_t rest = msg.subset & ~kbit;
      long f = d.requests[k - 1];
      if (rest & user_bit) {
        row.rhs ^= cache.entries.at({f, rest});  // known, fold into the rhs
      } else {
        size_t c = unknown_index.at({f, rest});
        row.mask[c / 64] ^= 1ull << (c % 64);
      }
    }
    rows.push_back(std::move(row));
  }

  // Gauss-Jordan over GF(2), column by column.
  std::vector<long> pivot_row_of(cols, -1);
  size_t next_row = 0;
  for (size_t c = 0; c < cols && next_row < rows.size(); ++c) {
    size_t pivot = next_row;
    while (pivot < rows.size() && !((rows[pivot].mask[c / 64] >> (c % 64)) & 1)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[next_row]);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == next_row) continue;
      if ((rows[i].mask[c / 64] >> (c % 64)) & 1) {
        for (size_t w = 0; w < words; ++w) rows[i].mask[w] ^= rows[next_row].mask[w];
        rows[i].rhs ^= rows[next_row].rhs;
      }
    }
    pivot_row_of[c] = static_cast<long>(next_row);
    ++next_row;
  }

  // Read off the user's missing subfiles; every one must be pinned uniquely.
  std::map<uint32_t, BitString> solved;
  const long want = d.requests[user - 1];
  for (uint32_t t : layout.subsets) {
    if (t & user_bit) continue;
    size_t c = unknown_index.at({want, t});
    long rix = pivot_row_of[c];
    if (rix < 0)
      throw std::logic_error("decode: transcript leaves a needed subfile undetermined");
    const Row& row = rows[rix];
    // uniqueness: the pivot row may not involve any free column
    for (size_t other = 0; other < cols; ++other) {
      if (other == c) continue;
      if (((row.mask[other / 64] >> (other % 64)) & 1) && pivot_row_of[other] < 0)
        throw std::logic_error("decode: needed subfile depends on a free variable");
    }
    // ...and involving other pivot columns is impossible after Gauss-Jordan
    solved[t] = row.rhs;
  }

  BitString file;
  for (size_t i = 0; i < layout.subsets.size(); ++i) {
    uint32_t t = layout.subsets[i];
    if (t & user_bit) file.append(cache.entries.at({want, t}));
    else file.append(solved.at(t));
  }
  return file;
}

SimulationOutcome simulate_all_demands(const SystemParams& p, size_t bits_per_file,
                                       uint64_t seed, bool verify_decode) {
  long r = integer_budget(p);
  if (bits_per_file == 0)
    bits_per_file = 8 * binomial(p.n_users, r).convert_to<size_t>();
  if (demand_space_size(p.n_files, p.n_users) > 1000000)
    throw std::domain_error("simulate_all_demands: demand space exceeds the 10^6 guard");

  FileLibrary lib = FileLibrary::random(p.n_files, bits_per_file, seed);
  std::vector<CacheContent> caches = place(lib, p);

  const BigInt subfile_count = binomial(p.n_users, r);
  SimulationOutcome out;
  unsigned long long total_messages = 0;
  long max_messages = -1;

  for_each_demand(p.n_files, p.n_users, [&](const std::vector<long>& reqs) {
    Demand d(reqs, p.n_files);
    auto messages = deliver(lib, p, d);

    long expect = (binomial(p.n_users, r + 1)
                   - binomial(p.n_users - n_e(d), r + 1)).convert_to<long>();
    if (static_cast<long>(messages.size()) != expect && out.load_identity_held) {
      out.load_identity_held = false;
      std::ostringstream os;
      os << "message count " << messages.size() << " != " << expect << " for demand";
      for (long f : reqs) os << " " << f;
      out.first_failure = os.str();
    }

    total_messages += messages.size();
    max_messages = std::max<long>(max_messages, static_cast<long>(messages.size()));
    ++out.rates.demands;

    if (verify_decode && out.all_decoded) {
      for (long k = 1; k <= p.n_users; ++k) {
        BitString got = decode(p, d, k, caches[k - 1], messages);
        if (!(got == lib.files[d.requests[k - 1] - 1])) {
          out.all_decoded = false;
          std::ostringstream os;
          os << "user " << k << " decoded the wrong bits for demand";
          for (long f : reqs) os << " " << f;
          out.first_failure = os.str();
          break;
        }
      }
    }
  });

  // bits per demand = messages * (F / C(K,r)), so rate = messages / C(K,r)
  out.rates.peak = Rational(BigInt(max_messages), subfile_count);
  out.rates.average = Rational(BigInt(total_messages),
                               subfile_count * demand_space_size(p.n_files, p.n_users));
  return out;
}

MeasuredRates measured_rates(const SystemParams& p, size_t bits_per_file, uint64_t seed) {
  return simulate_all_demands(p, bits_per_file, seed, false).rates;
}

std::string transcript(const FileLibrary& lib, const SystemParams& p, const Demand& d) {
  auto messages = deliver(lib, p, d);
  std::ostringstream os;
  for (const auto& msg : messages) {
    os << "S={";
    bool first = true;
    for (long k = 1; k <= p.n_users; ++k) {
      if (msg.subset & (1u << (k - 1))) {
        if (!first) os << ",";
        os << k;
        first = false;
      }
    }
    os << "} payload=" << msg.payload.to_hex() << "\n";
  }
  return os.str();
}

}  // namespace cachegap
