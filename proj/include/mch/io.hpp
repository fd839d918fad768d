#ifndef MCH_IO_HPP
#define MCH_IO_HPP

#include <string>
#include <vector>

#include "mch/timeseries.hpp"

namespace mch {

// CSV with 9 significant digits per value; first column is the time axis.
void write_timeseries_csv(const std::string& path, const std::string& value_name,
                          const TimeSeries& series);

// General CSV: columns[i] must all share the same length.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

void write_text(const std::string& path, const std::string& content);

} // namespace mch

#endif
