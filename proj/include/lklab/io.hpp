#pragma once
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lklab/experiments.hpp"
#include "lklab/grid.hpp"

// Persistence: CSV with '.' decimal point, ',' separator, '\n' line ends and
// a header row always; doubles printed with %.17g so reruns are byte-stable;
// binary snapshots as flat little-endian float64 with a JSON header.
namespace lklab::io {

std::string format_double(double v);

std::string curve_to_csv(const Curve& c);
std::filesystem::path write_curve(const std::filesystem::path& dir, const Curve& c);

std::filesystem::path write_profile(const std::filesystem::path& dir, const WaveProfile& p,
                                    const std::string& stem);

void write_snapshot(const std::filesystem::path& stem, std::span<const double> data,
                    const nlohmann::json& header);
std::vector<double> read_snapshot(const std::filesystem::path& stem,
                                  nlohmann::json* header = nullptr);

nlohmann::json report_to_json(const ExperimentReport& rep, const std::string& config_hash,
                              const std::string& canonical_config,
                              const std::vector<std::string>& curve_files);

// minimal self-contained line chart of the chosen columns
std::string svg_line_chart(const Curve& c, int xcol, const std::vector<int>& ycols,
                           int width = 640, int height = 400);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace lklab::io
