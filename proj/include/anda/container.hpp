#pragma once

// On-disk containers. Everything is little-endian and byte-exact:
//
//   .anda  magic "ANDA" | version u16 | group_size u16 | mantissa_len u16 |
//          reserved u16 | rows u32 | cols u32 | group_count u32 |
//          exponent stream (1 byte per group) |
//          plane stream (per group: sign word + M plane words, u64 each)
//
//   .andt  magic "ANDT" | version u16 | dtype u16 (0=binary16, 1=binary32,
//          2=int8) | rank u32 | dims u32 x rank | raw payload

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "anda/errors.hpp"
#include "anda/half.hpp"
#include "anda/layout.hpp"
#include "anda/matrix.hpp"
#include "anda/tensor.hpp"

namespace anda {

inline constexpr uint16_t kAndaContainerVersion = 1;
inline constexpr uint16_t kAndtContainerVersion = 1;

enum class Dtype : uint16_t { Binary16 = 0, Binary32 = 1, Int8 = 2 };

namespace detail {

inline void put_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void get_bytes(std::istream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) throw TruncatedStream();
}

inline void put_u16(std::ostream& os, uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF), static_cast<unsigned char>(v >> 8)};
    put_bytes(os, b, 2);
}

inline void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    put_bytes(os, b, 4);
}

inline void put_u64(std::ostream& os, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    put_bytes(os, b, 8);
}

inline uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    get_bytes(is, b, 2);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

inline uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    get_bytes(is, b, 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
}

inline uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    get_bytes(is, b, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

} // namespace detail

// ---- .anda ----------------------------------------------------------------

inline void write_container(const AndaTensor& t, std::ostream& os) {
    if (t.params.group_size > kMaxLanes) throw GroupTooWide();
    detail::put_bytes(os, "ANDA", 4);
    detail::put_u16(os, kAndaContainerVersion);
    detail::put_u16(os, static_cast<uint16_t>(t.params.group_size));
    detail::put_u16(os, static_cast<uint16_t>(t.params.mantissa_len));
    detail::put_u16(os, 0); // reserved
    detail::put_u32(os, static_cast<uint32_t>(t.rows));
    detail::put_u32(os, static_cast<uint32_t>(t.cols));
    detail::put_u32(os, static_cast<uint32_t>(t.group_count()));
    for (const AndaGroup& g : t.groups)
        os.put(static_cast<char>(static_cast<int8_t>(g.shared_exp)));
    for (const AndaGroup& g : t.groups) {
        const PackedGroup p = pack_group(g);
        detail::put_u64(os, p.sign_plane);
        for (uint64_t plane : p.bit_planes) detail::put_u64(os, plane);
    }
    if (!os) throw Error("write failed");
}

inline AndaTensor read_container(std::istream& is) {
    char magic[4];
    detail::get_bytes(is, magic, 4);
    if (std::memcmp(magic, "ANDA", 4) != 0) throw BadMagic();
    const uint16_t version = detail::get_u16(is);
    if (version != kAndaContainerVersion) throw VersionUnsupported();
    AndaTensor t;
    t.params.group_size = detail::get_u16(is);
    t.params.mantissa_len = detail::get_u16(is);
    (void)detail::get_u16(is); // reserved
    t.rows = detail::get_u32(is);
    t.cols = detail::get_u32(is);
    const uint32_t group_count = detail::get_u32(is);
    if (!t.params.valid() || t.params.group_size > kMaxLanes) throw Error("invalid header params");
    if (group_count != t.rows * t.groups_per_row()) throw Error("group count inconsistent with shape");

    std::vector<int8_t> exps(group_count);
    for (uint32_t g = 0; g < group_count; ++g) {
        char c;
        detail::get_bytes(is, &c, 1);
        exps[g] = static_cast<int8_t>(c);
    }
    t.groups.reserve(group_count);
    for (uint32_t g = 0; g < group_count; ++g) {
        PackedGroup p;
        p.shared_exp_byte = exps[g];
        p.sign_plane = detail::get_u64(is);
        p.bit_planes.resize(static_cast<std::size_t>(t.params.mantissa_len));
        for (auto& plane : p.bit_planes) plane = detail::get_u64(is);
        t.groups.push_back(unpack_group(p, t.params.mantissa_len, t.params.group_size));
    }
    return t;
}

inline void save_anda(const AndaTensor& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    write_container(t, f);
}

inline AndaTensor load_anda(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open: " + path);
    return read_container(f);
}

// ---- .andt ----------------------------------------------------------------

struct RawTensor {
    Dtype dtype = Dtype::Binary16;
    std::vector<uint32_t> dims;
    std::vector<uint8_t> payload; // raw little-endian element bytes

    uint64_t element_count() const {
        uint64_t n = 1;
        for (uint32_t d : dims) n *= d;
        return n;
    }
};

inline std::size_t dtype_size(Dtype d) {
    switch (d) {
        case Dtype::Binary16: return 2;
        case Dtype::Binary32: return 4;
        case Dtype::Int8: return 1;
    }
    throw DtypeUnsupported();
}

inline void write_andt(const RawTensor& t, std::ostream& os) {
    if (t.dims.empty()) throw BadRank("rank must be >= 1");
    for (uint32_t d : t.dims)
        if (d == 0) throw Error("zero dimension");
    detail::put_bytes(os, "ANDT", 4);
    detail::put_u16(os, kAndtContainerVersion);
    detail::put_u16(os, static_cast<uint16_t>(t.dtype));
    detail::put_u32(os, static_cast<uint32_t>(t.dims.size()));
    for (uint32_t d : t.dims) detail::put_u32(os, d);
    if (t.payload.size() != t.element_count() * dtype_size(t.dtype))
        throw Error("payload size inconsistent with dims");
    detail::put_bytes(os, t.payload.data(), t.payload.size());
    if (!os) throw Error("write failed");
}

inline RawTensor read_andt(std::istream& is) {
    char magic[4];
    detail::get_bytes(is, magic, 4);
    if (std::memcmp(magic, "ANDT", 4) != 0) throw BadMagic();
    const uint16_t version = detail::get_u16(is);
    if (version != kAndtContainerVersion) throw VersionUnsupported();
    RawTensor t;
    const uint16_t dtype = detail::get_u16(is);
    if (dtype > 2) throw DtypeUnsupported();
    t.dtype = static_cast<Dtype>(dtype);
    const uint32_t rank = detail::get_u32(is);
    if (rank == 0 || rank > 8) throw BadRank();
    t.dims.resize(rank);
    uint64_t count = 1;
    for (auto& d : t.dims) {
        d = detail::get_u32(is);
        if (d == 0) throw Error("zero dimension");
        count *= d;
        if (count > (uint64_t{1} << 40)) throw Error("tensor too large");
    }
    t.payload.resize(count * dtype_size(t.dtype));
    detail::get_bytes(is, t.payload.data(), t.payload.size());
    return t;
}

inline void save_andt(const RawTensor& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    write_andt(t, f);
}

inline RawTensor load_andt(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open: " + path);
    return read_andt(f);
}

// ---- matrix <-> RawTensor bridges ------------------------------------------

inline RawTensor to_raw(const Matrix<Half>& m) {
    RawTensor t;
    t.dtype = Dtype::Binary16;
    t.dims = {static_cast<uint32_t>(m.rows), static_cast<uint32_t>(m.cols)};
    t.payload.resize(m.size() * 2);
    for (std::size_t i = 0; i < m.size(); ++i) {
        t.payload[2 * i] = static_cast<uint8_t>(m.data[i].bits & 0xFF);
        t.payload[2 * i + 1] = static_cast<uint8_t>(m.data[i].bits >> 8);
    }
    return t;
}

inline RawTensor to_raw(const Matrix<float>& m) {
    RawTensor t;
    t.dtype = Dtype::Binary32;
    t.dims = {static_cast<uint32_t>(m.rows), static_cast<uint32_t>(m.cols)};
    t.payload.resize(m.size() * 4);
    for (std::size_t i = 0; i < m.size(); ++i) {
        uint32_t bits;
        std::memcpy(&bits, &m.data[i], 4);
        for (int b = 0; b < 4; ++b) t.payload[4 * i + b] = static_cast<uint8_t>((bits >> (8 * b)) & 0xFF);
    }
    return t;
}

inline RawTensor to_raw(const Matrix<int8_t>& m) {
    RawTensor t;
    t.dtype = Dtype::Int8;
    t.dims = {static_cast<uint32_t>(m.rows), static_cast<uint32_t>(m.cols)};
    t.payload.resize(m.size());
    std::memcpy(t.payload.data(), m.data.data(), m.size());
    return t;
}

inline Matrix<Half> to_half_matrix(const RawTensor& t) {
    if (t.dtype != Dtype::Binary16) throw DtypeUnsupported("expected binary16 payload");
    if (t.dims.size() != 2) throw BadRank("expected rank-2 tensor");
    Matrix<Half> m(t.dims[0], t.dims[1]);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.data[i] = Half(static_cast<uint16_t>(t.payload[2 * i] | (t.payload[2 * i + 1] << 8)));
    return m;
}

inline Matrix<float> to_float_matrix(const RawTensor& t) {
    if (t.dtype != Dtype::Binary32) throw DtypeUnsupported("expected binary32 payload");
    if (t.dims.size() != 2) throw BadRank("expected rank-2 tensor");
    Matrix<float> m(t.dims[0], t.dims[1]);
    for (std::size_t i = 0; i < m.size(); ++i) {
        uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<uint32_t>(t.payload[4 * i + b]) << (8 * b);
        std::memcpy(&m.data[i], &bits, 4);
    }
    return m;
}

inline Matrix<int8_t> to_int8_matrix(const RawTensor& t) {
    if (t.dtype != Dtype::Int8) throw DtypeUnsupported("expected int8 payload");
    if (t.dims.size() != 2) throw BadRank("expected rank-2 tensor");
    Matrix<int8_t> m(t.dims[0], t.dims[1]);
    std::memcpy(m.data.data(), t.payload.data(), m.size());
    return m;
}

} // namespace anda
