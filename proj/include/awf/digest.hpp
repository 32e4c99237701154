#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace awf {

// Incremental SHA-256. The library's only digest; the algorithm tag stored in
// KB manifests and InterfaceHash values is "sha256".
class Sha256 {
public:
    Sha256();

    void update(const void* data, std::size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }

    // Finalizes and returns the lowercase hex digest. The object must not be
    // updated afterwards.
    std::string hex_digest();

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint64_t bit_count_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffer_len_ = 0;
};

inline constexpr const char* kDigestAlgorithm = "sha256";

std::string sha256_hex(std::string_view data);

// Streams the file through the hasher; throws awf::Error when unreadable.
std::string sha256_file(const std::filesystem::path& path);

} // namespace awf
