#ifndef PIR_DATAIO_HPP
#define PIR_DATAIO_HPP

// CSV ingestion and the father/son heights worked example.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/crc.hpp>
#include <Eigen/Dense>

#include "pir/errors.hpp"
#include "pir/intervals.hpp"
#include "pir/linreg.hpp"
#include "pir/reduction.hpp"

namespace pir {

/// Without a header, columns are addressed by their 1-based position ("1", "2", ...).
struct CsvSchema {
    std::string outcome_column;
    std::vector<std::string> predictor_columns;
    char delimiter = ',';
    bool has_header = true;
    double unit_scale = 1.0;  // multiplies every numeric field

    void validate() const {
        if (outcome_column.empty()) throw ValidationError("schema: outcome column is required");
        for (const auto& p : predictor_columns) {
            if (p == outcome_column) throw ValidationError("schema: outcome column '" + p + "' is also a predictor");
        }
        if (!(unit_scale > 0.0) || !std::isfinite(unit_scale)) throw ValidationError("schema: unit scale must be positive");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

inline bool blank(std::string_view s) { return trim(s).empty(); }

inline std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open file '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace detail

/// Parses CSV text. Row numbers in errors count data rows from 1.
inline Dataset parse_csv(const std::string& text, const CsvSchema& schema) {
    schema.validate();
    std::vector<std::string_view> lines;
    {
        std::string_view rest(text);
        while (!rest.empty()) {
            const std::size_t nl = rest.find('\n');
            const std::string_view line = rest.substr(0, nl);
            if (!detail::blank(line)) lines.push_back(line);
            if (nl == std::string_view::npos) break;
            rest.remove_prefix(nl + 1);
        }
    }
    if (lines.empty()) throw IngestionError("CSV input is empty");

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (schema.has_header) {
        for (auto f : detail::split(lines[0], schema.delimiter)) header.emplace_back(f);
        first_data = 1;
    } else {
        const std::size_t width = detail::split(lines[0], schema.delimiter).size();
        for (std::size_t j = 0; j < width; ++j) header.push_back(std::to_string(j + 1));
    }
    auto column_of = [&](const std::string& name) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (header[j] == name) return j;
        }
        throw IngestionError("CSV schema: column '" + name + "' not found");
    };
    const std::size_t y_col = column_of(schema.outcome_column);
    std::vector<std::size_t> x_cols;
    for (const auto& name : schema.predictor_columns) x_cols.push_back(column_of(name));

    const std::size_t n = lines.size() - first_data;
    Dataset d;
    d.outcome_name = schema.outcome_column;
    d.predictor_names = schema.predictor_columns;
    d.y.resize(static_cast<Eigen::Index>(n));
    d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(x_cols.size()));
    for (std::size_t i = 0; i < n; ++i) {
        const auto fields = detail::split(lines[first_data + i], schema.delimiter);
        auto cell = [&](std::size_t col) {
            if (col >= fields.size()) throw ParseError(i + 1, col + 1, "missing value");
            const auto v = detail::parse_number(fields[col]);
            if (!v) throw ParseError(i + 1, col + 1, "'" + std::string(fields[col]) + "' is not a finite number");
            return *v * schema.unit_scale;
        };
        const auto row = static_cast<Eigen::Index>(i);
        d.y(row) = cell(y_col);
        for (std::size_t j = 0; j < x_cols.size(); ++j) d.x(row, static_cast<Eigen::Index>(j)) = cell(x_cols[j]);
    }
    return d;
}

inline Dataset read_csv(const std::string& path, const CsvSchema& schema) {
    return parse_csv(detail::read_file(path), schema);
}

/// Writes outcome then predictors with a header row, values divided by
/// unit_scale so read_csv with the same schema restores them.
inline void write_csv(const std::string& path, const Dataset& d, const CsvSchema& schema) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError("cannot write file '" + path + "'");
    out << schema.outcome_column;
    for (const auto& name : schema.predictor_columns) out << schema.delimiter << name;
    out << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v / schema.unit_scale);
        out << buf;
    };
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        put(d.y(i));
        for (Eigen::Index j = 0; j < d.predictors(); ++j) {
            out << schema.delimiter;
            put(d.x(i, j));
        }
        out << '\n';
    }
}

inline std::uint32_t crc32_of_file(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

// --- father/son heights ----------------------------------------------------

inline constexpr std::size_t kFatherSonRows = 1078;
inline constexpr double kInchesToCm = 2.54;

/// Column layout of the father.son table (heights in inches).
inline CsvSchema father_son_schema() {
    CsvSchema s;
    s.outcome_column = "sheight";
    s.predictor_columns = {"fheight"};
    s.unit_scale = kInchesToCm;
    return s;
}

/// Loads the fixture in cm. Refuses a file whose CRC-32 differs from
/// `expected_crc32` when one is given, and any file that is not 1078 rows of
/// positive heights.
inline Dataset load_father_son(const std::string& path, std::optional<std::uint32_t> expected_crc32 = std::nullopt) {
    if (expected_crc32) {
        const std::uint32_t actual = crc32_of_file(path);
        if (actual != *expected_crc32) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "fixture checksum mismatch: expected %08x, got %08x",
                          static_cast<unsigned>(*expected_crc32), static_cast<unsigned>(actual));
            throw IngestionError(msg);
        }
    }
    Dataset d = read_csv(path, father_son_schema());
    if (static_cast<std::size_t>(d.rows()) != kFatherSonRows) {
        throw IngestionError("father/son fixture must have " + std::to_string(kFatherSonRows) + " rows, found " +
                             std::to_string(d.rows()));
    }
    if ((d.y.array() <= 0.0).any() || (d.x.array() <= 0.0).any()) {
        throw IngestionError("father/son fixture contains non-positive heights");
    }
    return d;
}

/// Every quantity of the single-predictor worked example.
struct ExampleReport {
    Eigen::Index n = 0;
    double beta0 = 0.0;
    double beta1 = 0.0;
    double sigma_eps = 0.0;  // unbiased
    double sigma_y = 0.0;    // unbiased
    double mu_y = 0.0;
    double rho_hat = 0.0;
    double r2 = 0.0;
    double r2_adj = 0.0;
    std::vector<std::pair<double, Interval>> pi_approx;  // (x, interval)
    std::vector<std::pair<double, Interval>> pi_exact;
    Interval mpi_approx;
    Interval mpi_exact;
    std::size_t conditional_hits = 0;  // y_i inside pi_exact(x_i)
    std::size_t marginal_hits = 0;     // y_i inside mpi_exact
    PirReport pir;
};

inline ExampleReport validate_example(const Dataset& data, Level level = Level{},
                                      const std::vector<double>& at = {160.0, 180.0}) {
    if (data.predictors() != 1) throw ValidationError("worked example needs exactly one predictor");
    const DesignMatrix design = build_design(data);
    const FitResult fit = fit_ols(design, data.y);

    ExampleReport r;
    r.n = fit.n;
    r.beta0 = fit.beta_hat(0);
    r.beta1 = fit.beta_hat(1);
    r.sigma_eps = fit.sigma_eps_unbiased();
    r.sigma_y = fit.sigma_y_unbiased();
    r.mu_y = fit.mu_y_hat;
    r.r2 = fit.r2;
    r.r2_adj = fit.r2_adj;
    r.rho_hat = std::copysign(std::sqrt(fit.r2), r.beta1);
    for (double x : at) {
        const Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
        r.pi_approx.emplace_back(x, pi_approx(fit, xv, level));
        r.pi_exact.emplace_back(x, pi_exact(fit, xv, level));
    }
    r.mpi_approx = pir::mpi_approx(data.y, level);
    r.mpi_exact = pir::mpi_exact(data.y, level);

    std::vector<Interval> conditional;
    conditional.reserve(static_cast<std::size_t>(fit.n));
    for (Eigen::Index i = 0; i < fit.n; ++i) conditional.push_back(pir::pi_exact(fit, design.predictor_row(i), level));
    const std::vector<double> y(data.y.data(), data.y.data() + data.y.size());
    r.conditional_hits = coverage_count(conditional, y);
    const std::vector<Interval> marginal(y.size(), r.mpi_exact);
    r.marginal_hits = coverage_count(marginal, y);
    r.pir = pir_report(fit, design, level);
    return r;
}

}  // namespace pir

#endif  // PIR_DATAIO_HPP
