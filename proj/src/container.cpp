#include "hgnn/container.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgnn/byte_io.hpp"
#include "hgnn/errors.hpp"

namespace hgnn {

namespace {

constexpr char kMagic[4] = {'H', 'G', 'A', 'V'};

void check_shape(const FeatureContainer& c) {
    if (c.audio.size() != std::size_t{c.n_audio} * c.d_audio || c.video.size() != std::size_t{c.n_video} * c.d_video) {
        throw DimensionError("feature container blocks do not match declared sizes");
    }
}

}  // namespace

std::vector<std::uint8_t> encode_container(const FeatureContainer& c) {
    check_shape(c);
    std::vector<std::uint8_t> out;
    out.reserve(kContainerHeaderBytes + 4 * (c.audio.size() + c.video.size()));
    out.insert(out.end(), kMagic, kMagic + 4);
    byte_io::put_u32(out, kContainerVersion);
    byte_io::put_u32(out, c.n_audio);
    byte_io::put_u32(out, c.d_audio);
    byte_io::put_u32(out, c.n_video);
    byte_io::put_u32(out, c.d_video);
    for (const float v : c.audio) {
        if (!std::isfinite(v)) throw NumericError("non-finite audio feature in container");
        byte_io::put_f32(out, v);
    }
    for (const float v : c.video) {
        if (!std::isfinite(v)) throw NumericError("non-finite video feature in container");
        byte_io::put_f32(out, v);
    }
    return out;
}

FeatureContainer decode_container(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kContainerHeaderBytes) {
        throw FormatError("container truncated: expected at least " + std::to_string(kContainerHeaderBytes) +
                          " header bytes, got " + std::to_string(bytes.size()));
    }
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) throw FormatError("bad container magic (expected HGAV)");
    const std::uint32_t version = byte_io::get_u32(bytes, 4);
    if (version != kContainerVersion) {
        throw FormatError("unsupported container version " + std::to_string(version));
    }
    FeatureContainer c;
    c.n_audio = byte_io::get_u32(bytes, 8);
    c.d_audio = byte_io::get_u32(bytes, 12);
    c.n_video = byte_io::get_u32(bytes, 16);
    c.d_video = byte_io::get_u32(bytes, 20);
    const std::uint64_t audio_n = std::uint64_t{c.n_audio} * c.d_audio;
    const std::uint64_t video_n = std::uint64_t{c.n_video} * c.d_video;
    const std::uint64_t expected = kContainerHeaderBytes + 4 * (audio_n + video_n);
    if (bytes.size() != expected) {
        throw FormatError("container length mismatch: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
    }
    c.audio.resize(audio_n);
    c.video.resize(video_n);
    std::size_t offset = kContainerHeaderBytes;
    for (auto& v : c.audio) {
        v = byte_io::get_f32(bytes, offset);
        offset += 4;
    }
    for (auto& v : c.video) {
        v = byte_io::get_f32(bytes, offset);
        offset += 4;
    }
    for (const float v : c.audio)
        if (!std::isfinite(v)) throw FormatError("container holds non-finite audio feature");
    for (const float v : c.video)
        if (!std::isfinite(v)) throw FormatError("container holds non-finite video feature");
    return c;
}

void write_container(const std::filesystem::path& path, const FeatureContainer& container) {
    byte_io::write_file(path, encode_container(container));
}

FeatureContainer read_container(const std::filesystem::path& path) {
    const auto bytes = byte_io::read_file(path);
    try {
        return decode_container(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace hgnn
