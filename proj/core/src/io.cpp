#include "qpt/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace qpt {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": malformed number '" + s + "'");
  }
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": malformed integer '" + s + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  return f;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "prep,k,time_s,channel,value\n";
  for (int l = 0; l < ds.n_preps(); ++l)
    for (int k = 0; k < ds.n_times(); ++k)
      for (int ch = 0; ch < kNumChannels; ++ch)
        f << (l + 1) << ',' << k << ',' << format_double(ds.times[static_cast<std::size_t>(k)])
          << ',' << channel_names()[static_cast<std::size_t>(ch)] << ','
          << format_double(ds.records[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]
                               .channel(ch))
          << '\n';
}

Dataset ingest_dataset(const std::filesystem::path& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || split_csv(line) != split_csv("prep,k,time_s,channel,value"))
    throw std::runtime_error(path.string() + ":1: expected header prep,k,time_s,channel,value");

  const auto& names = channel_names();
  std::map<int, double> time_of;
  // seen[(l,k)] = bitmask of channels present.
  std::map<std::pair<int, int>, unsigned> seen;
  std::map<std::pair<int, int>, SignalRecord> recs;
  int max_l = 0, max_k = 0;
  long lineno = 1;

  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw std::runtime_error(ctx + ": expected 5 columns");
    const int l = static_cast<int>(parse_long(cells[0], ctx));
    const int k = static_cast<int>(parse_long(cells[1], ctx));
    const double t = parse_double(cells[2], ctx);
    const auto it = std::find(names.begin(), names.end(), cells[3]);
    if (it == names.end()) throw std::runtime_error(ctx + ": unknown channel '" + cells[3] + "'");
    const int ch = static_cast<int>(it - names.begin());
    const double v = parse_double(cells[4], ctx);
    if (l < 1 || l > 20) throw std::runtime_error(ctx + ": prep out of range 1..20");
    if (k < 0) throw std::runtime_error(ctx + ": negative time index");

    if (auto f2 = time_of.find(k); f2 != time_of.end()) {
      if (f2->second != t)
        throw std::runtime_error(ctx + ": conflicting time for k=" + std::to_string(k));
    } else {
      time_of[k] = t;
    }
    const auto key = std::make_pair(l, k);
    if (seen[key] & (1u << ch))
      throw std::runtime_error(ctx + ": duplicate record (" + std::to_string(l) + "," +
                               std::to_string(k) + ",\"" + cells[3] + "\")");
    seen[key] |= 1u << ch;
    recs[key].channel(ch) = v;
    max_l = std::max(max_l, l);
    max_k = std::max(max_k, k);
  }

  Dataset ds;
  for (int l = 1; l <= 20; ++l) ds.preparations.push_back(std::to_string(l));
  for (int k = 0; k <= max_k; ++k) {
    const auto it = time_of.find(k);
    if (it == time_of.end())
      throw std::runtime_error(path.string() + ": missing time index " + std::to_string(k));
    ds.times.push_back(it->second);
  }
  ds.records.assign(20, std::vector<SignalRecord>(static_cast<std::size_t>(max_k + 1)));
  for (int l = 1; l <= 20; ++l)
    for (int k = 0; k <= max_k; ++k) {
      const auto key = std::make_pair(l, k);
      const auto it = seen.find(key);
      for (int ch = 0; ch < kNumChannels; ++ch)
        if (it == seen.end() || !(it->second & (1u << ch)))
          throw std::runtime_error(path.string() + ": missing record (" + std::to_string(l) +
                                   "," + std::to_string(k) + ",\"" +
                                   names[static_cast<std::size_t>(ch)] + "\")");
      ds.records[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(k)] = recs[key];
    }
  (void)max_l;
  if (auto err = ds.validate())
    throw std::runtime_error(path.string() + ": invalid dataset: " + *err);
  return ds;
}

void write_matrix_csv(const Mat& m, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      f << i << ',' << j << ',' << format_double(m(i, j).real()) << ','
        << format_double(m(i, j).imag()) << '\n';
}

Mat read_matrix_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || split_csv(line) != split_csv("row,col,re,im"))
    throw std::runtime_error(path.string() + ":1: expected header row,col,re,im");
  std::map<std::pair<long, long>, Complex> entries;
  long dim = 0, lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw std::runtime_error(ctx + ": expected 4 columns");
    const long i = parse_long(cells[0], ctx), j = parse_long(cells[1], ctx);
    entries[{i, j}] = Complex(parse_double(cells[2], ctx), parse_double(cells[3], ctx));
    dim = std::max({dim, i + 1, j + 1});
  }
  Mat m = Mat::Zero(dim, dim);
  for (const auto& [ij, v] : entries) m(ij.first, ij.second) = v;
  return m;
}

void write_series_csv(const std::vector<DecaySeries>& series, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "series,time_s,value\n";
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.times.size(); ++k)
      f << s.channel_label << ',' << format_double(s.times[k]) << ','
        << format_double(s.values[k]) << '\n';
}

std::vector<DecaySeries> read_series_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || split_csv(line) != split_csv("series,time_s,value"))
    throw std::runtime_error(path.string() + ":1: expected header series,time_s,value");
  std::vector<DecaySeries> out;
  long lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw std::runtime_error(ctx + ": expected 3 columns");
    if (out.empty() || out.back().channel_label != cells[0]) {
      out.emplace_back();
      out.back().channel_label = cells[0];
    }
    out.back().times.push_back(parse_double(cells[1], ctx));
    out.back().values.push_back(parse_double(cells[2], ctx));
  }
  return out;
}

void write_fit_table_csv(const RelaxationTable& table, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << "series,m0,t_star_s,c,err_m0,err_t_star,err_c,rmse,converged\n";
  for (std::size_t row = 0; row < 6; ++row) {
    const FitResult& r = table.fits[row];
    f << RelaxationTable::row_labels()[row] << ',' << format_double(r.m0) << ','
      << format_double(r.t_star) << ',' << format_double(r.c) << ','
      << format_double(r.std_errors[0]) << ',' << format_double(r.std_errors[1]) << ','
      << format_double(r.std_errors[2]) << ',' << format_double(r.rmse) << ','
      << (r.converged ? 1 : 0) << '\n';
  }
}

void write_svg_plot(const std::vector<DecaySeries>& series, const std::string& title,
                    bool log_x, const std::filesystem::path& path) {
  constexpr double W = 640, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      const double t = s.times[k];
      if (log_x && t <= 0.0) continue;
      xmin = std::min(xmin, log_x ? std::log10(t) : t);
      xmax = std::max(xmax, log_x ? std::log10(t) : t);
      ymin = std::min(ymin, s.values[k]);
      ymax = std::max(ymax, s.values[k]);
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax || ymin == ymax) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double xr = xmax - xmin, yr = ymax - ymin;
  auto px = [&](double x) { return ML + (x - xmin) / xr * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - ymin) / yr * (H - MT - MB); };

  auto f = open_out(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" "
       "font-family=\"sans-serif\" font-size=\"12\">\n";
  f << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  f << "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
    << "</text>\n";
  f << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
    << H - MB << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
    << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double fx = xmin + xr * tick / 4.0, fy = ymin + yr * tick / 4.0;
    char lbl[48];
    std::snprintf(lbl, sizeof lbl, "%.3g", log_x ? std::pow(10.0, fx) : fx);
    f << "<text x=\"" << px(fx) << "\" y=\"" << H - MB + 18
      << "\" text-anchor=\"middle\">" << lbl << "</text>\n";
    std::snprintf(lbl, sizeof lbl, "%.3g", fy);
    f << "<text x=\"" << ML - 8 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">" << lbl
      << "</text>\n";
  }
  f << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\">time (s" << (log_x ? ", log scale" : "") << ")</text>\n";

  int ci = 0;
  for (const auto& s : series) {
    const char* color = kColors[ci % 8];
    f << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      const double t = s.times[k];
      if (log_x && t <= 0.0) continue;
      f << px(log_x ? std::log10(t) : t) << ',' << py(s.values[k]) << ' ';
    }
    f << "\"/>\n";
    f << "<text x=\"" << W - MR - 5 << "\" y=\"" << MT + 16 * ci + 12
      << "\" text-anchor=\"end\" fill=\"" << color << "\">" << s.channel_label << "</text>\n";
    ++ci;
  }
  f << "</svg>\n";
}

}  // namespace qpt
