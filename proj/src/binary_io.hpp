#pragma once

// Little-endian encoding helpers shared by the file formats.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "deg/error.hpp"

namespace deg::io {

class Writer {
public:
  void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }

  void u16(std::uint16_t v) { put_le(v); }
  void u32(std::uint32_t v) { put_le(v); }
  void f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }

  const std::vector<char> &bytes() const { return bytes_; }

  void save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot open '" + path + "' for writing");
    out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
    if (!out)
      throw Error("write to '" + path + "' failed");
  }

private:
  template <typename T> void put_le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  std::vector<char> bytes_;
};

class Reader {
public:
  Reader(std::vector<char> bytes, std::string name)
      : bytes_(std::move(bytes)), name_(std::move(name)) {}

  static Reader open(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw Error("cannot open '" + path + "'");
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    return Reader(std::move(bytes), path);
  }

  void expect_magic(std::string_view m) {
    need(m.size());
    if (std::string_view(bytes_.data() + pos_, m.size()) != m)
      throw Error("'" + name_ + "': bad magic, expected " + std::string(m));
    pos_ += m.size();
  }

  std::uint16_t u16() { return get_le<std::uint16_t>(); }
  std::uint32_t u32() { return get_le<std::uint32_t>(); }
  float f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
  double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

  bool at_end() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const std::string &name() const { return name_; }

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n)
      throw Error("'" + name_ + "': truncated file");
  }

  void expect_end() const {
    if (!at_end())
      throw Error("'" + name_ + "': trailing bytes after payload");
  }

private:
  template <typename T> T get_le() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  std::vector<char> bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

} // namespace deg::io
