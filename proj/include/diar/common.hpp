#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <cstdint>

namespace diar {

/// Library error carrying a stable machine-readable code ("dim_mismatch",
/// "zero_norm", ...) next to a human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    explicit Error(std::string code)
        : std::runtime_error(code), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// FNV-1a 64-bit hash, used for deterministic seed derivation from labels.
inline std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace diar
