#pragma once

// Little-endian field encoding shared by the dataset and checkpoint formats.

#include "fedjam/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace fedjam::io {

class ByteWriter {
public:
    void bytes(std::string_view s) { buf_.append(s); }
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    const std::string& data() const noexcept { return buf_; }

private:
    void put(std::uint64_t v, int n)
    {
        for (int i = 0; i < n; ++i)
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }

    std::string buf_;
};

class ByteReader {
public:
    ByteReader(std::string_view data, std::string what) : data_(data), what_(std::move(what)) {}

    std::string_view bytes(std::size_t n)
    {
        need(n);
        std::string_view s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    float f32() { return std::bit_cast<float>(u32()); }

    std::size_t remaining() const noexcept { return data_.size() - pos_; }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw FormatError(what_ + ": " + msg + " (at byte " + std::to_string(pos_) + ")");
    }

private:
    void need(std::size_t n) const
    {
        if (data_.size() - pos_ < n)
            fail("unexpected end of file");
    }
    std::uint64_t get(int n)
    {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::string_view data_;
    std::string what_;
    std::size_t pos_ = 0;
};

/// Whole-file helpers; throw IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

} // namespace fedjam::io
