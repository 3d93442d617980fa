#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace dualgroup {

// Binary tensor container used for every array exchanged on disk.
// Layout (little-endian):
//   magic   "DBGT"      4 bytes
//   version u16         currently 1
//   dtype   u8          0 = f32, 1 = i32, 2 = u16, 3 = u8
//   rank    u8
//   dims    rank x u64
//   payload row-major, product(dims) x dtype size bytes
enum class Dtype : std::uint8_t { f32 = 0, i32 = 1, u16 = 2, u8 = 3 };

size_t dtype_size(Dtype d);

struct Tensor {
    Dtype dtype = Dtype::f32;
    std::vector<std::uint64_t> dims;
    std::vector<std::uint8_t> payload;

    std::uint64_t element_count() const {
        std::uint64_t n = 1;
        for (const std::uint64_t d : dims) n *= d;
        return n;
    }

    template <typename T>
    std::span<const T> as() const {
        return {reinterpret_cast<const T*>(payload.data()), payload.size() / sizeof(T)};
    }
};

Tensor make_f32(std::span<const float> values, std::vector<std::uint64_t> dims);
Tensor make_i32(std::span<const std::int32_t> values, std::vector<std::uint64_t> dims);
Tensor make_u16(std::span<const std::uint16_t> values, std::vector<std::uint64_t> dims);
Tensor make_u8(std::span<const std::uint8_t> values, std::vector<std::uint64_t> dims);

// Throws ParseError on malformed headers, truncated payloads, or trailing
// bytes; the error names the file and byte offset.
Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const Tensor& tensor);

}  // namespace dualgroup
