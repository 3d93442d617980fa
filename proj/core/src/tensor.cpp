#include "dualgroup/tensor.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "dualgroup/error.hpp"

// Payloads are written with memcpy from native types; the format is defined
// little-endian, which matches every platform this builds on.
static_assert(std::endian::native == std::endian::little,
              "DBGT serialization assumes a little-endian host");

namespace dualgroup {

namespace {

constexpr char kMagic[4] = {'D', 'B', 'G', 'T'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
Tensor make_tensor(Dtype dtype, std::span<const T> values, std::vector<std::uint64_t> dims) {
    Tensor t;
    t.dtype = dtype;
    t.dims = std::move(dims);
    if (t.element_count() != values.size())
        throw ValidationError("tensor: dims do not match the value count");
    t.payload.resize(values.size() * sizeof(T));
    std::memcpy(t.payload.data(), values.data(), t.payload.size());
    return t;
}

}  // namespace

size_t dtype_size(Dtype d) {
    switch (d) {
        case Dtype::f32: return 4;
        case Dtype::i32: return 4;
        case Dtype::u16: return 2;
        case Dtype::u8: return 1;
    }
    return 0;
}

Tensor make_f32(std::span<const float> values, std::vector<std::uint64_t> dims) {
    return make_tensor(Dtype::f32, values, std::move(dims));
}
Tensor make_i32(std::span<const std::int32_t> values, std::vector<std::uint64_t> dims) {
    return make_tensor(Dtype::i32, values, std::move(dims));
}
Tensor make_u16(std::span<const std::uint16_t> values, std::vector<std::uint64_t> dims) {
    return make_tensor(Dtype::u16, values, std::move(dims));
}
Tensor make_u8(std::span<const std::uint8_t> values, std::vector<std::uint64_t> dims) {
    return make_tensor(Dtype::u8, values, std::move(dims));
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), -1, "cannot open file");

    auto fail = [&](long long offset, const std::string& reason) -> ParseError {
        return ParseError(path.string(), offset, reason);
    };
    auto read_bytes = [&](void* dst, size_t count, long long offset) {
        in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
        if (in.gcount() != static_cast<std::streamsize>(count))
            throw fail(offset, "unexpected end of file");
    };

    char magic[4];
    read_bytes(magic, 4, 0);
    if (std::memcmp(magic, kMagic, 4) != 0) throw fail(0, "bad magic, not a DBGT file");

    std::uint16_t version = 0;
    read_bytes(&version, 2, 4);
    if (version != kVersion)
        throw fail(4, "unsupported version " + std::to_string(version));

    std::uint8_t dtype_code = 0, rank = 0;
    read_bytes(&dtype_code, 1, 6);
    if (dtype_code > 3) throw fail(6, "unknown dtype code " + std::to_string(dtype_code));
    read_bytes(&rank, 1, 7);

    Tensor t;
    t.dtype = static_cast<Dtype>(dtype_code);
    t.dims.resize(rank);
    for (int i = 0; i < rank; ++i) read_bytes(&t.dims[static_cast<size_t>(i)], 8, 8 + 8 * i);

    const std::uint64_t expected = t.element_count() * dtype_size(t.dtype);
    const long long payload_offset = 8 + 8ll * rank;
    t.payload.resize(expected);
    if (expected > 0) read_bytes(t.payload.data(), expected, payload_offset);

    char extra;
    in.read(&extra, 1);
    if (in.gcount() != 0)
        throw fail(payload_offset + static_cast<long long>(expected),
                   "trailing bytes after payload");
    return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
    if (tensor.payload.size() != tensor.element_count() * dtype_size(tensor.dtype))
        throw ValidationError("tensor: payload length does not match dims x dtype size");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError(path.string(), -1, "cannot open file for writing");

    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 2);
    const auto dtype_code = static_cast<std::uint8_t>(tensor.dtype);
    const auto rank = static_cast<std::uint8_t>(tensor.dims.size());
    out.write(reinterpret_cast<const char*>(&dtype_code), 1);
    out.write(reinterpret_cast<const char*>(&rank), 1);
    for (const std::uint64_t d : tensor.dims)
        out.write(reinterpret_cast<const char*>(&d), 8);
    out.write(reinterpret_cast<const char*>(tensor.payload.data()),
              static_cast<std::streamsize>(tensor.payload.size()));
    if (!out) throw ParseError(path.string(), -1, "write failed");
}

}  // namespace dualgroup
