#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dcprot::comms {

/// Dataset entry kinds used by the protection application.
enum class EntryKind : uint8_t {
    relay_pickup = 1,
    relay_tripped = 2,
    breaker_closed = 3,
    line_in_service = 4,
    source_in_service = 5,
};

struct DatasetEntry {
    uint8_t kind = 0;
    uint32_t entry_id = 0;
    bool value = false;

    bool operator==(const DatasetEntry&) const = default;
};

/// Status frame exchanged on the station bus. st_num increments on every
/// state change; sq_num counts retransmissions of one state and resets to 0
/// with each st_num increment.
struct GooseFrame {
    uint16_t app_id = 0;
    uint32_t publisher_id = 0;
    uint32_t st_num = 0;
    uint32_t sq_num = 0;
    uint64_t timestamp_ns = 0;
    std::vector<DatasetEntry> dataset;

    bool operator==(const GooseFrame&) const = default;
};

inline constexpr size_t kMaxDatasetEntries = 64;
inline constexpr size_t kFrameHeaderBytes = 25; // magic..count
inline constexpr size_t kEntryBytes = 6;

/// Serializes to the fixed wire layout: magic 0x47 0x4F, then app_id,
/// publisher_id, st_num, sq_num, timestamp big-endian, a 1-byte entry count
/// and 6 bytes per entry. Throws std::length_error when the dataset exceeds
/// 64 entries.
std::vector<uint8_t> encode_frame(const GooseFrame& frame);

enum class DecodeError {
    none,
    bad_magic,
    truncated,
    oversized_dataset,
    trailing_bytes,
    bad_value,
};

const char* to_string(DecodeError err);

struct DecodeResult {
    std::optional<GooseFrame> frame;
    DecodeError error = DecodeError::none;

    bool ok() const { return frame.has_value(); }
};

/// Total on arbitrary byte strings: returns a frame or a classified error,
/// never throws on malformed input.
DecodeResult decode_frame(std::span<const uint8_t> bytes);

std::string to_hex(std::span<const uint8_t> bytes);
std::vector<uint8_t> from_hex(const std::string& hex);

} // namespace dcprot::comms
