#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "endslab/errors.hpp"

namespace endslab::detail {

// Zigzag LEB128. Every field of a canonical key is self-delimiting, so a
// concatenation of fields decodes unambiguously.

inline void put_unsigned(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

inline void put_signed(std::string& out, std::int64_t v) {
  put_unsigned(out, (static_cast<std::uint64_t>(v) << 1) ^
                        static_cast<std::uint64_t>(v >> 63));
}

class KeyReader {
 public:
  explicit KeyReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t get_unsigned() {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
      if (pos_ >= bytes_.size() || shift > 63) {
        throw InvalidParameter("malformed canonical key");
      }
      auto byte = static_cast<unsigned char>(bytes_[pos_++]);
      v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
      if ((byte & 0x80) == 0) return v;
      shift += 7;
    }
  }

  std::int64_t get_signed() {
    std::uint64_t u = get_unsigned();
    return static_cast<std::int64_t>(u >> 1) ^ -static_cast<std::int64_t>(u & 1);
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace endslab::detail
