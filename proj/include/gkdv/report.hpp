#pragma once

#include <map>
#include <string>
#include <vector>

namespace gkdv {

// A norm broken into its named components; total is their sum.
struct NormReport {
    std::map<std::string, double> components;
    double total = 0.0;
    std::map<std::string, double> params;
};

// Tabular outcome of a scripted experiment.  columns/rows carry the
// plot-ready table; scalars carry headline numbers (slopes, residuals);
// notes label where each reference value comes from.
struct ExperimentReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> scalars;
    std::vector<std::string> notes;
    bool passed = true;
    std::vector<std::string> failures;

    void fail(const std::string& why) {
        passed = false;
        failures.push_back(why);
    }
};

// Least-squares slope of y against x (both already in the scale the caller
// wants, e.g. log-log); returns {slope, stderr}.  Needs >= 2 points.
std::pair<double, double> fit_slope(const std::vector<double>& x,
                                    const std::vector<double>& y);

// RFC 4180 CSV (CRLF line endings); floats printed with %.17g so emission
// is bit-stable.
std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows);

std::string format_double(double v);  // %.17g

}  // namespace gkdv
