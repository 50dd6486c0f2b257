#ifndef FRACBVP_IO_HPP
#define FRACBVP_IO_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbvp/analysis.hpp"
#include "fracbvp/common.hpp"
#include "fracbvp/solver.hpp"
#include "fracbvp/specfun.hpp"

namespace fracbvp::io {

/// Full-precision decimal (17 significant digits): lossless for doubles.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Header row, comma separators, LF line endings.
inline std::string to_csv(const CsvTable& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += fmt(row[i]);
        }
        out += '\n';
    }
    return out;
}

/// Write-to-temp-then-rename so concurrent readers never observe a torn file.
inline void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw Error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot rename " + tmp + " to " + path);
}

inline nlohmann::json to_json(const analysis::BoundReport& r) {
    nlohmann::json j{{"kind", analysis::to_string(r.kind)},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"verdict", analysis::to_string(r.verdict)},
                     {"quad_error", r.quad_error}};
    if (r.omega) j["omega"] = *r.omega;
    if (r.norm_u) j["norm_u"] = *r.norm_u;
    return j;
}

inline nlohmann::json to_json(const analysis::ThetaPair& tp) {
    return {{"theta", tp.theta},
            {"theta_star", tp.theta_star},
            {"theta_quad_error", tp.theta_quad_error},
            {"theta_star_quad_error", tp.theta_star_quad_error},
            {"crossing_point", tp.crossing_point}};
}

inline nlohmann::json summary_json(const solver::SolutionGrid& sol) {
    return {{"iterations", sol.iterations},
            {"residual_sup", sol.residual_sup},
            {"norm", sol.norm()},
            {"converged", sol.converged},
            {"diverged", sol.diverged},
            {"n_grid", sol.grid.size()}};
}

inline CsvTable solution_csv(const solver::SolutionGrid& sol) {
    CsvTable t;
    t.header = {"t", "u"};
    t.rows.reserve(sol.grid.size());
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        t.rows.push_back({sol.grid[i], sol.values[i]});
    return t;
}

inline CsvTable eigenfunction_csv(const solver::EigenPair& pair, int n_samples = 400) {
    CsvTable t;
    t.header = {"t", "u"};
    for (int i = 0; i <= n_samples; ++i) {
        const double x = static_cast<double>(i) / n_samples;
        t.rows.push_back({x, pair.eval(x)});
    }
    return t;
}

inline nlohmann::json to_json(const solver::EigenPair& p) {
    return {{"lambda", p.lambda},
            {"series_length", p.series_length},
            {"derivative_residual", p.derivative_residual},
            {"ml_at_root", p.ml_at_root},
            {"normalization", p.normalization}};
}

/// Samples of lambda -> E_{alpha,gamma}(-lambda); the raw data behind the
/// root-scan pictures.
inline CsvTable ml_curve_csv(double alpha, double gamma_, double lambda_lo,
                             double lambda_hi, int n_samples,
                             const specfun::SeriesPolicy& pol = {}) {
    require(n_samples >= 2, "ml_curve_csv: need at least two samples");
    require(lambda_lo < lambda_hi, "ml_curve_csv: empty lambda range");
    CsvTable t;
    t.header = {"lambda", "ml_value"};
    for (int i = 0; i <= n_samples; ++i) {
        const double lam = lambda_lo + (lambda_hi - lambda_lo) * i / n_samples;
        t.rows.push_back({lam, specfun::ml_eval(alpha, gamma_, -lam, pol).value});
    }
    return t;
}

} // namespace fracbvp::io

#endif // FRACBVP_IO_HPP
