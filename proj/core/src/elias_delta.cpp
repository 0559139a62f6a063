#include "kschan/elias_delta.hpp"

#include <bit>

namespace kschan {
namespace {

unsigned floor_log2(std::uint64_t v) { return static_cast<unsigned>(std::bit_width(v)) - 1; }

}  // namespace

BitString BitString::from_string(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BitString: expected only '0' and '1'");
    }
    out.push_back(c == '1');
  }
  return out;
}

void BitString::append(std::uint64_t value, unsigned width) {
  for (unsigned k = width; k-- > 0;) bits_.push_back(((value >> k) & 1U) != 0);
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

unsigned elias_delta_length(std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("elias_delta_length: i must be >= 1");
  const unsigned n = floor_log2(i);
  return n + 2 * floor_log2(n + 1) + 1;
}

void elias_delta_append(BitString& out, std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("elias_delta_encode: i must be >= 1");
  const unsigned n = floor_log2(i);       // bits after the leading one
  const unsigned l = floor_log2(n + 1);   // gamma prefix length
  out.append(0, l);
  out.append(n + 1, l + 1);
  out.append(i, n);
}

BitString elias_delta_encode(std::uint64_t i) {
  BitString out;
  elias_delta_append(out, i);
  return out;
}

std::uint64_t elias_delta_decode_prefix(const BitString& bits, std::size_t& pos) {
  std::size_t p = pos;
  unsigned l = 0;
  while (p < bits.size() && !bits[p]) {
    ++l;
    ++p;
  }
  if (p == bits.size()) throw DecodeError("elias delta: truncated length prefix");
  if (l > 6) throw DecodeError("elias delta: length prefix overflows 64 bits");

  std::uint64_t n_plus_one = 0;
  for (unsigned k = 0; k <= l; ++k, ++p) {
    if (p >= bits.size()) throw DecodeError("elias delta: truncated length field");
    n_plus_one = (n_plus_one << 1) | (bits[p] ? 1U : 0U);
  }
  const std::uint64_t n = n_plus_one - 1;
  if (n > 63) throw DecodeError("elias delta: value overflows 64 bits");

  std::uint64_t value = 1;
  for (std::uint64_t k = 0; k < n; ++k, ++p) {
    if (p >= bits.size()) throw DecodeError("elias delta: truncated mantissa");
    value = (value << 1) | (bits[p] ? 1U : 0U);
  }
  pos = p;
  return value;
}

std::uint64_t elias_delta_decode(const BitString& bits) {
  std::size_t pos = 0;
  const std::uint64_t value = elias_delta_decode_prefix(bits, pos);
  if (pos != bits.size()) throw DecodeError("elias delta: trailing bits after codeword");
  return value;
}

}  // namespace kschan
