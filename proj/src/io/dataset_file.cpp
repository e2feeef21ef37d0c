#include "fedjam/io/dataset_file.hpp"

#include "fedjam/io/binary.hpp"

#include <fstream>
#include <sstream>

namespace fedjam::io {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

std::string encode_dataset(const signal::ClientDataset& ds)
{
    ByteWriter w;
    w.bytes(kDatasetMagic);
    w.u16(kDatasetVersion);
    w.u16(0);
    w.u32(ds.client_id);
    w.u32(ds.femtocell_id);
    w.u32(static_cast<std::uint32_t>(ds.observations.size()));
    w.u32(ds.q_len);
    w.u32(ds.counts.train);
    w.u32(ds.counts.valid);
    w.u32(ds.counts.test);
    for (std::size_t i = 0; i < ds.observations.size(); ++i) {
        const auto& obs = ds.observations[i];
        w.u8(static_cast<std::uint8_t>(obs.label));
        w.u8(static_cast<std::uint8_t>(ds.tags[i]));
        for (const auto& v : obs.iq) {
            w.f32(v.real());
            w.f32(v.imag());
        }
    }
    return w.data();
}

signal::ClientDataset decode_dataset(std::string_view bytes)
{
    ByteReader r(bytes, "dataset");
    if (r.bytes(4) != kDatasetMagic)
        r.fail("bad magic, expected \"SSBD\"");
    if (const auto v = r.u16(); v != kDatasetVersion)
        r.fail("unsupported version " + std::to_string(v));
    r.u16();
    signal::ClientDataset ds;
    ds.client_id = r.u32();
    ds.femtocell_id = r.u32();
    const std::uint32_t n_obs = r.u32();
    ds.q_len = r.u32();
    ds.counts.train = r.u32();
    ds.counts.valid = r.u32();
    ds.counts.test = r.u32();
    if (static_cast<std::uint64_t>(ds.counts.train) + ds.counts.valid + ds.counts.test != n_obs)
        r.fail("split counts do not sum to n_obs");
    const std::uint64_t record = 2 + 8ULL * ds.q_len;
    if (record * n_obs != r.remaining())
        r.fail("payload size does not match n_obs * record size");

    signal::SplitCounts seen;
    ds.observations.resize(n_obs);
    ds.tags.resize(n_obs);
    for (std::uint32_t i = 0; i < n_obs; ++i) {
        const std::uint8_t label = r.u8();
        const std::uint8_t tag = r.u8();
        if (label > 1)
            r.fail("label must be 0 or 1");
        if (tag > 2)
            r.fail("split tag must be 0, 1 or 2");
        auto& obs = ds.observations[i];
        obs.label = static_cast<signal::Label>(label);
        ds.tags[i] = static_cast<signal::SplitTag>(tag);
        (tag == 0 ? seen.train : tag == 1 ? seen.valid : seen.test)++;
        obs.iq.resize(ds.q_len);
        for (auto& v : obs.iq) {
            const float re = r.f32();
            const float im = r.f32();
            v = {re, im};
        }
    }
    if (seen.train != ds.counts.train || seen.valid != ds.counts.valid || seen.test != ds.counts.test)
        r.fail("record split tags disagree with header counts");
    return ds;
}

void write_dataset(const std::string& path, const signal::ClientDataset& ds) { write_file(path, encode_dataset(ds)); }

signal::ClientDataset read_dataset(const std::string& path)
{
    try {
        return decode_dataset(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

} // namespace fedjam::io
