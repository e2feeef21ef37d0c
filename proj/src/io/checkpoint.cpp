#include "fedjam/io/checkpoint.hpp"

#include "fedjam/io/binary.hpp"

namespace fedjam::io {

std::string encode_checkpoint(const nn::ModelState& model)
{
    ByteWriter w;
    w.bytes(kCheckpointMagic);
    w.u16(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(model.layers().size()));
    for (const nn::LayerSpec& l : model.layers()) {
        w.u8(static_cast<std::uint8_t>(l.kind));
        w.u32(static_cast<std::uint32_t>(l.in_dim));
        w.u32(static_cast<std::uint32_t>(l.out_dim));
        w.u8(l.frozen ? 1 : 0);
        w.f32(static_cast<float>(l.rate));
    }
    for (double p : model.params())
        w.f32(static_cast<float>(p));
    return w.data();
}

nn::ModelState decode_checkpoint(std::string_view bytes)
{
    ByteReader r(bytes, "checkpoint");
    if (r.bytes(4) != kCheckpointMagic)
        r.fail("bad magic, expected \"FJCK\"");
    if (const auto v = r.u16(); v != kCheckpointVersion)
        r.fail("unsupported version " + std::to_string(v));
    const std::uint32_t n_layers = r.u32();
    if (static_cast<std::uint64_t>(n_layers) * 14 > r.remaining())
        r.fail("layer table truncated");
    std::vector<nn::LayerSpec> layers(n_layers);
    for (auto& l : layers) {
        const std::uint8_t kind = r.u8();
        if (kind > static_cast<std::uint8_t>(nn::LayerKind::sigmoid))
            r.fail("unknown layer kind " + std::to_string(kind));
        l.kind = static_cast<nn::LayerKind>(kind);
        l.in_dim = r.u32();
        l.out_dim = r.u32();
        l.frozen = r.u8() != 0;
        l.rate = r.f32();
    }
    nn::ModelState model;
    try {
        model = nn::ModelState(std::move(layers));
    } catch (const Error& e) {
        r.fail(std::string("invalid layer table: ") + e.what());
    }
    if (r.remaining() != 4 * model.params().size())
        r.fail("parameter blob has " + std::to_string(r.remaining() / 4) + " values, layers require " +
               std::to_string(model.params().size()));
    auto p = model.mutable_params();
    for (double& v : p)
        v = r.f32();
    model.set_mode(nn::Mode::eval);
    return model;
}

void write_checkpoint(const std::string& path, const nn::ModelState& model)
{
    write_file(path, encode_checkpoint(model));
}

nn::ModelState read_checkpoint(const std::string& path)
{
    try {
        return decode_checkpoint(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

bool same_architecture(std::span<const nn::LayerSpec> a, std::span<const nn::LayerSpec> b, bool compare_frozen)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].kind != b[i].kind || a[i].in_dim != b[i].in_dim || a[i].out_dim != b[i].out_dim)
            return false;
        if (static_cast<float>(a[i].rate) != static_cast<float>(b[i].rate))
            return false;
        if (compare_frozen && a[i].frozen != b[i].frozen)
            return false;
    }
    return true;
}

} // namespace fedjam::io
