#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sgmc {

/// CSV with a mandatory header; first column is time (or the named abscissa),
/// floats serialized with 17 significant digits.
std::string csv_format(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

/// Minimal self-contained SVG line chart (axes, ticks, legend); deterministic
/// bytes for identical inputs.
struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<PlotSeries>& series);

/// Collects artifacts for one run, writes them under a directory, and emits a
/// MANIFEST of content hashes (one "fnv1a64:<hex>  <name>" line per artifact,
/// sorted by name).
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path out_dir);

    void add(const std::string& name, const std::string& content);
    void write_manifest();

    const std::map<std::string, std::uint64_t>& hashes() const { return hashes_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::uint64_t> hashes_;
};

/// Reads a whole file (for manifest comparisons in tests and the CLI).
std::string read_file(const std::filesystem::path& path);

}  // namespace sgmc
