#include "mch/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mch {

namespace {

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
    for (const auto* c : columns)
        if (c->size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << fmt9((*columns[i])[r]) << (i + 1 < columns.size() ? "," : "\n");
}

void write_timeseries_csv(const std::string& path, const std::string& value_name,
                          const TimeSeries& series) {
    std::vector<double> t(series.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = series.time_at(k);
    write_csv(path, {"t_seconds", value_name}, {&t, &series.values});
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_text: cannot open " + path);
    out << content;
}

} // namespace mch
