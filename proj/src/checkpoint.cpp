#include <algorithm>
#include <cmath>

#include "hgnn/byte_io.hpp"
#include "hgnn/errors.hpp"
#include "hgnn/training.hpp"

namespace hgnn {

namespace {

constexpr char kMagic[4] = {'H', 'G', 'C', 'K'};

nlohmann::json shapes_json(const std::vector<TensorRecord>& records) {
    auto out = nlohmann::json::array();
    for (const auto& r : records) out.push_back({{"name", r.name}, {"rows", r.rows}, {"cols", r.cols}});
    return out;
}

std::vector<TensorRecord> shapes_from_json(const nlohmann::json& j) {
    std::vector<TensorRecord> out;
    for (const auto& e : j) {
        out.push_back({e.at("name").get<std::string>(), e.at("rows").get<std::size_t>(), e.at("cols").get<std::size_t>(), {}});
    }
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& c) {
    nlohmann::json header;
    header["train"] = to_json(c.train);
    header["model"] = to_json(c.model);
    header["iteration"] = c.iteration;
    header["adam_step"] = c.adam_step;
    header["sampler"] = {{"state", c.sampler_state}, {"order", c.order}, {"cursor", c.cursor}};
    header["params"] = shapes_json(c.params);
    header["first_moment"] = shapes_json(c.first_moment);
    header["second_moment"] = shapes_json(c.second_moment);
    const std::string text = header.dump();

    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    byte_io::put_u32(out, kCheckpointVersion);
    byte_io::put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    for (const auto* group : {&c.params, &c.first_moment, &c.second_moment}) {
        for (const auto& r : *group) {
            if (r.values.size() != r.rows * r.cols) {
                throw DimensionError("checkpoint tensor '" + r.name + "' has the wrong number of values");
            }
            for (const float v : r.values) byte_io::put_f32(out, v);
        }
    }
    return out;
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12) throw FormatError("checkpoint truncated: " + std::to_string(bytes.size()) + " bytes");
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) throw FormatError("bad checkpoint magic (expected HGCK)");
    const std::uint32_t version = byte_io::get_u32(bytes, 4);
    if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
    const std::uint32_t json_len = byte_io::get_u32(bytes, 8);
    if (bytes.size() < 12 + std::size_t{json_len}) throw FormatError("checkpoint truncated inside config JSON");

    Checkpoint c;
    try {
        const auto header = nlohmann::json::parse(bytes.begin() + 12, bytes.begin() + 12 + json_len);
        c.train = train_config_from_json(header.at("train"));
        c.model = model_config_from_json(header.at("model"));
        c.iteration = header.at("iteration").get<std::size_t>();
        c.adam_step = header.at("adam_step").get<std::size_t>();
        c.sampler_state = header.at("sampler").at("state").get<std::string>();
        c.order = header.at("sampler").at("order").get<std::vector<std::size_t>>();
        c.cursor = header.at("sampler").at("cursor").get<std::size_t>();
        c.params = shapes_from_json(header.at("params"));
        c.first_moment = shapes_from_json(header.at("first_moment"));
        c.second_moment = shapes_from_json(header.at("second_moment"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad checkpoint header: ") + e.what());
    }

    std::size_t expected = 12 + json_len;
    for (const auto* group : {&c.params, &c.first_moment, &c.second_moment})
        for (const auto& r : *group) expected += 4 * r.rows * r.cols;
    if (bytes.size() != expected) {
        throw FormatError("checkpoint length mismatch: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
    }
    std::size_t offset = 12 + json_len;
    for (auto* group : {&c.params, &c.first_moment, &c.second_moment}) {
        for (auto& r : *group) {
            r.values.resize(r.rows * r.cols);
            for (auto& v : r.values) {
                v = byte_io::get_f32(bytes, offset);
                offset += 4;
                if (!std::isfinite(v)) throw FormatError("checkpoint tensor '" + r.name + "' holds a non-finite value");
            }
        }
    }
    return c;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    byte_io::write_file(path, encode_checkpoint(checkpoint));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    const auto bytes = byte_io::read_file(path);
    try {
        return decode_checkpoint(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace hgnn
