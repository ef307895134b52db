#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hgnn {

// Per-clip segment embeddings. On disk:
//   "HGAV" | version u32 | n_audio u32 | d_audio u32 | n_video u32 | d_video u32
//   | audio block (row-major f32) | video block (row-major f32)
// with every integer and float little-endian.
struct FeatureContainer {
    std::uint32_t n_audio = 0;
    std::uint32_t d_audio = 0;
    std::uint32_t n_video = 0;
    std::uint32_t d_video = 0;
    std::vector<float> audio;
    std::vector<float> video;

    bool operator==(const FeatureContainer&) const = default;
};

inline constexpr std::uint32_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 24;

std::vector<std::uint8_t> encode_container(const FeatureContainer& container);
FeatureContainer decode_container(std::span<const std::uint8_t> bytes);

void write_container(const std::filesystem::path& path, const FeatureContainer& container);
FeatureContainer read_container(const std::filesystem::path& path);

}  // namespace hgnn
