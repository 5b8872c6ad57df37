#ifndef SEEDFOLIO_CORE_DIGEST_HPP
#define SEEDFOLIO_CORE_DIGEST_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace seedfolio {

// FNV-1a, 64 bit. Content fingerprint for provenance fields; not cryptographic.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string digest_hex(std::string_view bytes) {
    static const char* hexdig = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hexdig[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace seedfolio

#endif
