#pragma once

#include <cstdint>
#include <string>

namespace exporate {

/// Streaming SHA-256 (FIPS 180-4). Used for artifact manifests only.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    /// Finalizes and returns the lowercase hex digest. The object must not be
    /// updated afterwards.
    std::string hex_digest();

    static std::string hash_hex(const std::string& bytes);
    static std::string hash_file_hex(const std::string& path);

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint64_t total_len_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffer_len_ = 0;
};

} // namespace exporate
