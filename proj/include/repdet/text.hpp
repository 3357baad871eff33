#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace repdet {

// Number of Unicode scalar values in a UTF-8 byte string. Counts every
// non-continuation byte, so invalid bytes each count as one character;
// the same convention is used everywhere lengths are measured in characters.
size_t utf8_length(std::string_view bytes);

// Longest prefix of `bytes` containing at most `n_chars` characters. Never
// splits a multi-byte sequence.
std::string_view utf8_prefix(std::string_view bytes, size_t n_chars);

// Byte offsets of the character starts in `bytes`, with a final entry equal
// to bytes.size(). size() == utf8_length(bytes) + 1.
std::vector<int32_t> utf8_char_starts(std::string_view bytes);

// Whitespace-separated tokens (space, tab, CR, LF, FF, VT as separators).
std::vector<std::string_view> split_tokens(std::string_view text);

// ASCII lowercase copy.
std::string ascii_lower(std::string_view s);

// FNV-1a 64-bit hash; stable across platforms.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xCBF29CE484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

}  // namespace repdet
