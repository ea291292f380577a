#include "dcprot/comms/frame.hpp"

#include <stdexcept>

namespace dcprot::comms {

namespace {

constexpr uint8_t kMagic0 = 0x47; // 'G'
constexpr uint8_t kMagic1 = 0x4F; // 'O'

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(v >> shift));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(v >> shift));
}

uint16_t get_u16(const uint8_t* p) { return static_cast<uint16_t>(p[0] << 8 | p[1]); }

uint32_t get_u32(const uint8_t* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

uint64_t get_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | p[i];
    return v;
}

} // namespace

std::vector<uint8_t> encode_frame(const GooseFrame& frame) {
    if (frame.dataset.size() > kMaxDatasetEntries)
        throw std::length_error("dataset exceeds 64 entries");
    std::vector<uint8_t> out;
    out.reserve(kFrameHeaderBytes + kEntryBytes * frame.dataset.size());
    out.push_back(kMagic0);
    out.push_back(kMagic1);
    put_u16(out, frame.app_id);
    put_u32(out, frame.publisher_id);
    put_u32(out, frame.st_num);
    put_u32(out, frame.sq_num);
    put_u64(out, frame.timestamp_ns);
    out.push_back(static_cast<uint8_t>(frame.dataset.size()));
    for (const auto& e : frame.dataset) {
        out.push_back(e.kind);
        put_u32(out, e.entry_id);
        out.push_back(e.value ? 1 : 0);
    }
    return out;
}

const char* to_string(DecodeError err) {
    switch (err) {
    case DecodeError::none: return "none";
    case DecodeError::bad_magic: return "bad magic";
    case DecodeError::truncated: return "truncated frame";
    case DecodeError::oversized_dataset: return "dataset count exceeds 64";
    case DecodeError::trailing_bytes: return "length mismatch (trailing bytes)";
    case DecodeError::bad_value: return "boolean value byte not 0 or 1";
    }
    return "unknown";
}

DecodeResult decode_frame(std::span<const uint8_t> bytes) {
    if (bytes.size() < 2) return {std::nullopt, DecodeError::truncated};
    if (bytes[0] != kMagic0 || bytes[1] != kMagic1) return {std::nullopt, DecodeError::bad_magic};
    if (bytes.size() < kFrameHeaderBytes) return {std::nullopt, DecodeError::truncated};

    const uint8_t* p = bytes.data();
    GooseFrame frame;
    frame.app_id = get_u16(p + 2);
    frame.publisher_id = get_u32(p + 4);
    frame.st_num = get_u32(p + 8);
    frame.sq_num = get_u32(p + 12);
    frame.timestamp_ns = get_u64(p + 16);
    size_t count = p[24];
    if (count > kMaxDatasetEntries) return {std::nullopt, DecodeError::oversized_dataset};
    size_t expected = kFrameHeaderBytes + kEntryBytes * count;
    if (bytes.size() < expected) return {std::nullopt, DecodeError::truncated};
    if (bytes.size() > expected) return {std::nullopt, DecodeError::trailing_bytes};

    frame.dataset.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        const uint8_t* e = p + kFrameHeaderBytes + i * kEntryBytes;
        uint8_t value = e[5];
        if (value > 1) return {std::nullopt, DecodeError::bad_value};
        frame.dataset.push_back({e[0], get_u32(e + 1), value == 1});
    }
    return {std::move(frame), DecodeError::none};
}

std::string to_hex(std::span<const uint8_t> bytes) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("invalid hex digit");
    };
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
    std::vector<uint8_t> out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
    return out;
}

} // namespace dcprot::comms
