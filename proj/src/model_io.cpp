#include "kpcanet/model_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace kpcanet {

std::uint32_t crc32(const std::uint8_t *data, std::size_t size) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : (c >> 1);
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < size; ++i)
        crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

namespace {

constexpr char kMagic[4] = {'K', 'P', 'C', 'N'};

struct Writer {
    std::vector<std::uint8_t> bytes;

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void f64_span(const double *p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) f64(p[i]);
    }
};

struct Reader {
    const std::vector<std::uint8_t> &bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size()) throw DataError("model file truncated");
    }
    std::uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(bytes[pos++]) << (8 * i);
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos++]) << (8 * i);
        return v;
    }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    void f64_span(double *p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) p[i] = f64();
    }
};

void write_kernel(Writer &w, const KernelSpec &k) {
    w.u8(static_cast<std::uint8_t>(k.kind));
    w.f64(k.c);
    w.f64(k.sigma);
    w.f64(k.alpha);
    w.u32(static_cast<std::uint32_t>(k.degree));
}

KernelSpec read_kernel(Reader &r) {
    KernelSpec k;
    std::uint8_t kind = r.u8();
    if (kind > static_cast<std::uint8_t>(KernelKind::Spherical))
        throw DataError("model file: unknown kernel kind");
    k.kind = static_cast<KernelKind>(kind);
    k.c = r.f64();
    k.sigma = r.f64();
    k.alpha = r.f64();
    k.degree = static_cast<int>(r.u32());
    return k;
}

void write_config(Writer &w, const NetConfig &c) {
    w.u32(static_cast<std::uint32_t>(c.stages));
    w.u32(static_cast<std::uint32_t>(c.patch_rows));
    w.u32(static_cast<std::uint32_t>(c.patch_cols));
    w.u32(static_cast<std::uint32_t>(c.filters_per_stage.size()));
    for (int L : c.filters_per_stage) w.u32(static_cast<std::uint32_t>(L));
    write_kernel(w, c.kernel);
    w.u32(static_cast<std::uint32_t>(c.block_rows));
    w.u32(static_cast<std::uint32_t>(c.block_cols));
    w.f64(c.overlap_ratio);
    w.u32(static_cast<std::uint32_t>(c.train_patch_budget));
    w.u64(c.seed);
    w.u8(c.remove_patch_mean ? 1 : 0);
    w.u8(c.share_stage_filters ? 1 : 0);
}

NetConfig read_config(Reader &r) {
    NetConfig c;
    c.stages = static_cast<int>(r.u32());
    c.patch_rows = static_cast<int>(r.u32());
    c.patch_cols = static_cast<int>(r.u32());
    c.filters_per_stage.resize(r.u32());
    for (auto &L : c.filters_per_stage) L = static_cast<int>(r.u32());
    c.kernel = read_kernel(r);
    c.block_rows = static_cast<int>(r.u32());
    c.block_cols = static_cast<int>(r.u32());
    c.overlap_ratio = r.f64();
    c.train_patch_budget = static_cast<int>(r.u32());
    c.seed = r.u64();
    c.remove_patch_mean = r.u8() != 0;
    c.share_stage_filters = r.u8() != 0;
    return c;
}

void write_basis(Writer &w, const KpcaBasis &b) {
    write_kernel(w, b.kernel);
    const int dim = b.basis_patches.patch_dim();
    const int m = b.basis_patches.count();
    const int L = b.num_components;
    w.u32(static_cast<std::uint32_t>(dim));
    w.u32(static_cast<std::uint32_t>(m));
    w.u32(static_cast<std::uint32_t>(L));
    w.f64_span(b.basis_patches.cols.data(), static_cast<std::size_t>(dim) * m);
    // alphas row-major (row = component)
    for (int l = 0; l < L; ++l)
        for (int p = 0; p < m; ++p) w.f64(b.alphas(l, p));
    w.f64_span(b.eigenvalues.data(), static_cast<std::size_t>(L));
    w.f64_span(b.basis_col_means.data(), static_cast<std::size_t>(m));
    w.f64(b.basis_total_mean);
}

KpcaBasis read_basis(Reader &r) {
    KpcaBasis b;
    b.kernel = read_kernel(r);
    const int dim = static_cast<int>(r.u32());
    const int m = static_cast<int>(r.u32());
    const int L = static_cast<int>(r.u32());
    if (dim <= 0 || m <= 0 || L <= 0 || L > m)
        throw DataError("model file: invalid basis dimensions");
    b.basis_patches = PatchMatrix(dim, m);
    r.f64_span(b.basis_patches.cols.data(), static_cast<std::size_t>(dim) * m);
    b.alphas.resize(L, m);
    for (int l = 0; l < L; ++l)
        for (int p = 0; p < m; ++p) b.alphas(l, p) = r.f64();
    b.eigenvalues.resize(L);
    r.f64_span(b.eigenvalues.data(), static_cast<std::size_t>(L));
    b.basis_col_means.resize(m);
    r.f64_span(b.basis_col_means.data(), static_cast<std::size_t>(m));
    b.basis_total_mean = r.f64();
    b.num_components = L;
    return b;
}

void write_classifier(Writer &w, const LinearModel &m) {
    w.u32(static_cast<std::uint32_t>(m.class_count));
    w.u64(static_cast<std::uint64_t>(m.dim));
    w.f64_span(m.weights.data(), m.weights.size());
    w.f64_span(m.bias.data(), m.bias.size());
    w.f64_span(m.feature_scale.data(), m.feature_scale.size());
}

LinearModel read_classifier(Reader &r) {
    LinearModel m;
    m.class_count = static_cast<int>(r.u32());
    m.dim = static_cast<std::size_t>(r.u64());
    if (m.class_count < 0) throw DataError("model file: invalid classifier header");
    m.weights.resize(static_cast<std::size_t>(m.class_count) * m.dim);
    r.f64_span(m.weights.data(), m.weights.size());
    m.bias.resize(static_cast<std::size_t>(m.class_count));
    r.f64_span(m.bias.data(), m.bias.size());
    m.feature_scale.resize(m.dim);
    r.f64_span(m.feature_scale.data(), m.feature_scale.size());
    return m;
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model &model) {
    Writer w;
    w.bytes.insert(w.bytes.end(), kMagic, kMagic + 4);
    w.u16(kModelFormatVersion);
    write_config(w, model.config);
    w.u32(static_cast<std::uint32_t>(model.class_count));
    w.u32(static_cast<std::uint32_t>(model.stage_bases.size()));
    for (const auto &b : model.stage_bases) write_basis(w, b);
    write_classifier(w, model.classifier);
    w.u32(crc32(w.bytes.data(), w.bytes.size()));
    return w.bytes;
}

Model deserialize_model(const std::vector<std::uint8_t> &bytes) {
    if (bytes.size() < 10) throw DataError("model file too short");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DataError("not a model file (bad magic)");
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i)
        stored |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
    if (crc32(bytes.data(), bytes.size() - 4) != stored)
        throw DataError("model file corrupt (checksum mismatch)");

    Reader r{bytes};
    r.pos = 4;
    std::uint16_t version = r.u16();
    if (version != kModelFormatVersion)
        throw DataError("unsupported model format version " + std::to_string(version) +
                        " (expected " + std::to_string(kModelFormatVersion) + ")");
    Model model;
    model.config = read_config(r);
    model.class_count = static_cast<int>(r.u32());
    std::uint32_t stages = r.u32();
    model.stage_bases.reserve(stages);
    for (std::uint32_t s = 0; s < stages; ++s) model.stage_bases.push_back(read_basis(r));
    model.classifier = read_classifier(r);
    if (r.pos != bytes.size() - 4) throw DataError("model file: trailing bytes");
    return model;
}

void save_model(const std::filesystem::path &path, const Model &model) {
    auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed: " + path.string());
}

Model load_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace kpcanet
