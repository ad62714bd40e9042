#include "lklab/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lklab::io {
namespace {

void append_le(std::string& out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + 8);
  out.append(buf, 8);
}

double take_le(const char* buf) {
  char tmp[8];
  std::memcpy(tmp, buf, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(tmp, tmp + 8);
  double v;
  std::memcpy(&v, tmp, 8);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string curve_to_csv(const Curve& c) {
  std::string out;
  for (size_t j = 0; j < c.columns.size(); ++j) {
    if (j) out += ',';
    out += c.columns[j];
  }
  out += '\n';
  for (const auto& row : c.rows) {
    if (row.size() != c.columns.size())
      throw std::invalid_argument("curve row width does not match header: " + c.name);
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path write_curve(const std::filesystem::path& dir, const Curve& c) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (c.name + ".csv");
  write_text(path, curve_to_csv(c));
  return path;
}

std::filesystem::path write_profile(const std::filesystem::path& dir, const WaveProfile& p,
                                    const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::string csv = "x," + p.tag + "\n";
  for (int j = 0; j < p.grid.n; ++j)
    csv += format_double(p.grid.node(j)) + "," + format_double(p.values[j]) + "\n";
  const auto path = dir / (stem + ".csv");
  write_text(path, csv);

  nlohmann::json side;
  side["n"] = p.grid.n;
  side["half_width"] = p.grid.half_width;
  side["tag"] = p.tag;
  side["parity"] = p.parity == Parity::even ? "even" : (p.parity == Parity::odd ? "odd" : "none");
  write_text(dir / (stem + ".json"), side.dump(2) + "\n");
  return path;
}

void write_snapshot(const std::filesystem::path& stem, std::span<const double> data,
                    const nlohmann::json& header) {
  std::string raw;
  raw.reserve(8 * data.size());
  for (double v : data) append_le(raw, v);
  write_text(std::filesystem::path(stem).concat(".f64"), raw);

  nlohmann::json h = header;
  h["count"] = data.size();
  h["dtype"] = "float64-le";
  write_text(std::filesystem::path(stem).concat(".json"), h.dump(2) + "\n");
}

std::vector<double> read_snapshot(const std::filesystem::path& stem, nlohmann::json* header) {
  const std::string raw = read_text(std::filesystem::path(stem).concat(".f64"));
  if (raw.size() % 8 != 0) throw std::runtime_error("snapshot not a whole number of float64");
  std::vector<double> data(raw.size() / 8);
  for (size_t i = 0; i < data.size(); ++i) data[i] = take_le(raw.data() + 8 * i);
  if (header)
    *header = nlohmann::json::parse(read_text(std::filesystem::path(stem).concat(".json")));
  return data;
}

nlohmann::json report_to_json(const ExperimentReport& rep, const std::string& config_hash,
                              const std::string& canonical_config,
                              const std::vector<std::string>& curve_files) {
  nlohmann::json j;
  j["name"] = rep.name;
  j["params"] = rep.params;
  j["fitted"] = rep.fitted;
  j["seed"] = rep.seed;
  j["config_hash"] = config_hash;
  j["canonical_config"] = canonical_config;
  j["curve_files"] = curve_files;
  j["aborted"] = rep.aborted;
  if (rep.aborted) j["abort_note"] = rep.abort_note;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : rep.verdicts) {
    nlohmann::json jv;
    jv["criterion"] = v.criterion;
    jv["pass"] = v.pass;
    jv["measured"] = v.measured;
    jv["tolerance"] = v.tolerance;
    vs.push_back(jv);
  }
  j["verdicts"] = vs;
  return j;
}

std::string svg_line_chart(const Curve& c, int xcol, const std::vector<int>& ycols,
                           int width, int height) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const int margin = 46;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& row : c.rows) {
    xmin = std::min(xmin, row[xcol]);
    xmax = std::max(xmax, row[xcol]);
    for (int yc : ycols) {
      ymin = std::min(ymin, row[yc]);
      ymax = std::max(ymax, row[yc]);
    }
  }
  if (c.rows.empty() || xmax <= xmin) {
    xmin = 0;
    xmax = 1;
  }
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto px = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
                height - margin, width - margin, height - margin);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
                margin, margin, height - margin);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"12\">%s</text>\n", margin,
                margin - 10, c.name.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"11\">%s: %s .. %s</text>\n", margin,
                height - margin + 28, c.columns[xcol].c_str(), format_double(xmin).c_str(),
                format_double(xmax).c_str());
  svg += buf;

  for (size_t s = 0; s < ycols.size(); ++s) {
    std::string pts;
    for (const auto& row : c.rows) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(row[xcol]), py(row[ycols[s]]));
      pts += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(palette[s % 5]) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"11\" fill=\"%s\">%s</text>\n",
                  width - margin - 120, margin + 16 * static_cast<int>(s),
                  palette[s % 5], c.columns[ycols[s]].c_str());
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string out((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return out;
}

}  // namespace lklab::io
