#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ylab/field.hpp"

namespace ylab {

/// Snapshot container: named real-space fields on a common grid at one time.
/// File layout: "YLAB1" magic, u32 N, f64 L, u32 field count, f64 t, then per
/// field the row-major 8-byte little-endian samples.
struct Snapshot {
    Grid2D grid;
    double t = 0.0;
    std::vector<std::string> names;          // not serialized; derived on read
    std::vector<std::vector<double>> fields;  // real-space samples per field
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

Snapshot snapshot_of(std::initializer_list<std::pair<std::string, const SpectralField*>> fields,
                     double t);

/// CSV emitter with the artifact header comment; all numbers are written with
/// %.17g so repeated runs produce byte-identical files.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash,
              const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    void close();

  private:
    std::FILE* f_ = nullptr;
};

std::uint64_t fnv1a_file(const std::filesystem::path& path);

}  // namespace ylab
