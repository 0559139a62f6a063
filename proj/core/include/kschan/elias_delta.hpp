#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kschan {

// Sequence of bits, most significant (first transmitted) bit first.
class BitString {
 public:
  BitString() = default;

  // Parses a string of '0'/'1' characters; throws std::invalid_argument on
  // anything else.
  static BitString from_string(std::string_view text);

  void push_back(bool bit) { bits_.push_back(bit); }
  // Appends the low `width` bits of `value`, most significant first.
  void append(std::uint64_t value, unsigned width);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of bits in the Elias delta codeword of i >= 1:
// floor(log2 i) + 2 floor(log2(floor(log2 i) + 1)) + 1.
unsigned elias_delta_length(std::uint64_t i);

// Throws std::invalid_argument for i == 0.
BitString elias_delta_encode(std::uint64_t i);
void elias_delta_append(BitString& out, std::uint64_t i);

// Reads one codeword starting at `pos` and advances `pos` past it.
// Throws DecodeError on truncated input or a value outside [1, 2^64).
std::uint64_t elias_delta_decode_prefix(const BitString& bits, std::size_t& pos);

// Decodes a message that must consist of exactly one codeword.
std::uint64_t elias_delta_decode(const BitString& bits);

}  // namespace kschan
