#pragma once
// Flat-file formats: the dataset CSV (`prep,k,time_s,channel,value`), complex
// matrix CSVs (`row,col,re,im`), fit/series tables, and static SVG line plots
// rendered from the same series. All writers are deterministic: fixed float
// formatting, no timestamps.

#include "qpt/analysis.hpp"
#include "qpt/dataset.hpp"

#include <filesystem>

namespace qpt {

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

// Parses and validates; throws std::runtime_error with the file line number
// and the offending (prep, k, channel) on the first violation.
Dataset ingest_dataset(const std::filesystem::path& path);

void write_matrix_csv(const Mat& m, const std::filesystem::path& path);
Mat read_matrix_csv(const std::filesystem::path& path);

void write_series_csv(const std::vector<DecaySeries>& series, const std::filesystem::path& path);
std::vector<DecaySeries> read_series_csv(const std::filesystem::path& path);

void write_fit_table_csv(const RelaxationTable& table, const std::filesystem::path& path);

// Static SVG line plot of one or more series. With log_x, the t = 0 sample is
// dropped from the drawing (the data files keep it).
void write_svg_plot(const std::vector<DecaySeries>& series, const std::string& title,
                    bool log_x, const std::filesystem::path& path);

// Fixed-format float used by every writer ("%.17g": lossless round trip).
std::string format_double(double v);

}  // namespace qpt
