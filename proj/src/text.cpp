#include "repdet/text.hpp"

#include <cctype>

namespace repdet {

namespace {
inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }
}  // namespace

size_t utf8_length(std::string_view bytes) {
    size_t n = 0;
    for (unsigned char b : bytes)
        if (!is_continuation(b)) ++n;
    return n;
}

std::string_view utf8_prefix(std::string_view bytes, size_t n_chars) {
    size_t seen = 0;
    for (size_t i = 0; i < bytes.size(); ++i) {
        if (!is_continuation(static_cast<unsigned char>(bytes[i]))) {
            if (seen == n_chars) return bytes.substr(0, i);
            ++seen;
        }
    }
    return bytes;
}

std::vector<int32_t> utf8_char_starts(std::string_view bytes) {
    std::vector<int32_t> starts;
    starts.reserve(bytes.size() + 1);
    for (size_t i = 0; i < bytes.size(); ++i)
        if (!is_continuation(static_cast<unsigned char>(bytes[i])))
            starts.push_back(static_cast<int32_t>(i));
    starts.push_back(static_cast<int32_t>(bytes.size()));
    return starts;
}

std::vector<std::string_view> split_tokens(std::string_view text) {
    std::vector<std::string_view> out;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.push_back(text.substr(start, i - start));
    }
    return out;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace repdet
