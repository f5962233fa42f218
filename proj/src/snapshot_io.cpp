#include "ylab/snapshot_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

namespace ylab {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {
constexpr char kMagic[5] = {'Y', 'L', 'A', 'B', '1'};

void put_u32(std::FILE* f, std::uint32_t v) { std::fwrite(&v, 4, 1, f); }
void put_f64(std::FILE* f, double v) { std::fwrite(&v, 8, 1, f); }
}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw Error("cannot open snapshot file for writing: " + path.string());
    std::fwrite(kMagic, 1, 5, f);
    put_u32(f, static_cast<std::uint32_t>(snap.grid.n));
    put_f64(f, snap.grid.length);
    put_u32(f, static_cast<std::uint32_t>(snap.fields.size()));
    put_f64(f, snap.t);
    for (const std::vector<double>& field : snap.fields) {
        if (static_cast<int>(field.size()) != snap.grid.size()) {
            std::fclose(f);
            throw Error("snapshot field size does not match the grid");
        }
        std::fwrite(field.data(), 8, field.size(), f);
    }
    std::fclose(f);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw Error("cannot open snapshot file: " + path.string());
    char magic[5];
    std::uint32_t n = 0, count = 0;
    double length = 0.0, t = 0.0;
    bool ok = std::fread(magic, 1, 5, f) == 5 && std::memcmp(magic, kMagic, 5) == 0 &&
              std::fread(&n, 4, 1, f) == 1 && std::fread(&length, 8, 1, f) == 1 &&
              std::fread(&count, 4, 1, f) == 1 && std::fread(&t, 8, 1, f) == 1;
    if (!ok) {
        std::fclose(f);
        throw Error("not a YLAB1 snapshot: " + path.string());
    }
    Snapshot snap;
    snap.grid = Grid2D(static_cast<int>(n), length);
    snap.t = t;
    snap.fields.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        snap.fields[i].resize(static_cast<size_t>(n) * n);
        if (std::fread(snap.fields[i].data(), 8, snap.fields[i].size(), f) !=
            snap.fields[i].size()) {
            std::fclose(f);
            throw Error("truncated snapshot: " + path.string());
        }
        snap.names.push_back("field" + std::to_string(i));
    }
    std::fclose(f);
    return snap;
}

Snapshot snapshot_of(std::initializer_list<std::pair<std::string, const SpectralField*>> fields,
                     double t) {
    Snapshot snap;
    snap.t = t;
    for (const auto& [name, f] : fields) {
        snap.grid = f->grid();
        snap.names.push_back(name);
        snap.fields.push_back(to_real(*f));
    }
    return snap;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash,
                     const std::vector<std::string>& columns) {
    f_ = std::fopen(path.string().c_str(), "wb");
    if (!f_) throw Error("cannot open csv for writing: " + path.string());
    std::fprintf(f_, "# ylab v1 config=%016llx\n",
                 static_cast<unsigned long long>(config_hash));
    for (size_t i = 0; i < columns.size(); ++i)
        std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
    std::fprintf(f_, "\n");
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i)
        std::fprintf(f_, "%s%.17g", i ? "," : "", values[i]);
    std::fprintf(f_, "\n");
}

void CsvWriter::close() {
    if (f_) {
        std::fclose(f_);
        f_ = nullptr;
    }
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw Error("cannot hash missing file: " + path.string());
    std::uint64_t h = 1469598103934665603ull;
    unsigned char buf[65536];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) {
        for (size_t i = 0; i < got; ++i) {
            h ^= buf[i];
            h *= 1099511628211ull;
        }
    }
    std::fclose(f);
    return h;
}

}  // namespace ylab
