#pragma once

// Little-endian byte (de)serialization helpers shared by the file formats.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "kdss/error.hpp"

namespace kdss::detail {

inline void put_bytes(std::string& out, const void* src, std::size_t n) {
    out.append(static_cast<const char*>(src), n);
}

template <typename T>
void put_le(std::string& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
        std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
#endif
    out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

/// Bounds-checked little-endian reader over an in-memory buffer.
class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t size, std::size_t offset = 0)
        : data_(data), size_(size), pos_(offset) {}

    std::size_t pos() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return size_ - pos_; }

    template <typename T>
    T get_le() {
        require(sizeof(T));
        T value;
        std::memcpy(&value, data_ + pos_, sizeof(T));
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
        auto* bytes = reinterpret_cast<unsigned char*>(&value);
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
            std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        }
#endif
        pos_ += sizeof(T);
        return value;
    }

    void skip(std::size_t n) {
        require(n);
        pos_ += n;
    }

private:
    void require(std::size_t n) const {
        if (n > size_ - pos_) {
            throw IoError("unexpected end of data at byte " +
                          std::to_string(size_));
        }
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_;
};

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      const std::string& bytes);

}  // namespace kdss::detail
