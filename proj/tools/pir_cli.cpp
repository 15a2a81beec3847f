// pir: command-line front end for prediction interval reduction analyses.
//
// Exit codes: 0 success, 2 usage/validation, 3 ingestion (file, schema,
// parse), 4 computation (singular design, insufficient or degenerate data).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pir/pir.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIngestion = 3;
constexpr int kExitComputation = 4;

// ---- tabular output -------------------------------------------------------

// decimals: -2 = use the global precision, -1 = shortest round-trip form,
// >= 0 = fixed number of decimals.
struct Cell {
    std::variant<std::string, long long, double> value;
    int decimals = -2;
};

Cell num(double v, int decimals = -2) { return Cell{v, decimals}; }
Cell count(long long v) { return Cell{v, -2}; }
Cell str(std::string s) { return Cell{std::move(s), -2}; }

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool record = false;  // a single result rendered as one JSON object
};

enum class Format { Text, Csv, Json };

class Renderer {
public:
    explicit Renderer(int precision) : precision_(precision) {}

    std::string render(const Table& t, Format f) const {
        switch (f) {
            case Format::Csv: return csv(t);
            case Format::Json: return json(t);
            case Format::Text: return text(t);
        }
        return {};
    }

private:
    int decimals_for(const Cell& c) const { return c.decimals == -2 ? precision_ : c.decimals; }

    double rounded(double v, int decimals) const {
        if (decimals < 0 || !std::isfinite(v)) return v;
        // Round through the printed form so JSON and text carry the same value.
        const double r = std::strtod(fixed(v, decimals).c_str(), nullptr);
        return r == 0.0 ? 0.0 : r;
    }

    static std::string fixed(double v, int decimals) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        std::string s = buf;
        if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
        return s;
    }

    std::string cell_text(const Cell& c) const {
        if (const auto* s = std::get_if<std::string>(&c.value)) return *s;
        if (const auto* i = std::get_if<long long>(&c.value)) return std::to_string(*i);
        const double v = std::get<double>(c.value);
        if (std::isnan(v)) return "NA";
        const int d = decimals_for(c);
        if (d < 0) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.15g", v);
            return buf;
        }
        return fixed(v, d);
    }

    nlohmann::ordered_json cell_json(const Cell& c) const {
        if (const auto* s = std::get_if<std::string>(&c.value)) return *s;
        if (const auto* i = std::get_if<long long>(&c.value)) return *i;
        const double v = std::get<double>(c.value);
        if (std::isnan(v)) return nullptr;
        return rounded(v, decimals_for(c));
    }

    std::string csv(const Table& t) const {
        std::string out;
        for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "," : "") + t.columns[j];
        out += '\n';
        for (const auto& row : t.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + cell_text(row[j]);
            out += '\n';
        }
        return out;
    }

    std::string json(const Table& t) const {
        auto row_obj = [&](const std::vector<Cell>& row) {
            nlohmann::ordered_json o = nlohmann::ordered_json::object();
            for (std::size_t j = 0; j < row.size(); ++j) o[t.columns[j]] = cell_json(row[j]);
            return o;
        };
        nlohmann::ordered_json doc;
        if (t.record && t.rows.size() == 1) {
            doc = row_obj(t.rows.front());
        } else {
            doc = nlohmann::ordered_json::array();
            for (const auto& row : t.rows) doc.push_back(row_obj(row));
        }
        return doc.dump(2) + "\n";
    }

    std::string text(const Table& t) const {
        if (t.record && t.rows.size() == 1) {
            std::size_t key_w = 0;
            for (const auto& c : t.columns) key_w = std::max(key_w, c.size());
            std::string out;
            for (std::size_t j = 0; j < t.columns.size(); ++j) {
                out += t.columns[j] + std::string(key_w - t.columns[j].size() + 2, ' ') + cell_text(t.rows[0][j]) + "\n";
            }
            return out;
        }
        std::vector<std::size_t> widths(t.columns.size());
        std::vector<std::vector<std::string>> cells;
        for (std::size_t j = 0; j < t.columns.size(); ++j) widths[j] = t.columns[j].size();
        for (const auto& row : t.rows) {
            auto& r = cells.emplace_back();
            for (std::size_t j = 0; j < row.size(); ++j) {
                r.push_back(cell_text(row[j]));
                widths[j] = std::max(widths[j], r.back().size());
            }
        }
        auto emit = [&](const std::vector<std::string>& r) {
            std::string line;
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (j) line += "  ";
                line += std::string(widths[j] - r[j].size(), ' ') + r[j];
            }
            return line + "\n";
        };
        std::string out = emit(t.columns);
        for (const auto& r : cells) out += emit(r);
        return out;
    }

    int precision_;
};

// ---- shared options ---------------------------------------------------------

struct OutputOptions {
    std::string format = "text";
    int precision = 4;
    std::string out;
};

struct SchemaOptions {
    std::string data;
    std::string outcome;
    std::vector<std::string> predictors;
    std::string delimiter = ",";
    bool no_header = false;
    double scale = 1.0;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--precision", o.precision, "Decimal places for printed numbers")
        ->check(CLI::Range(0, 15))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
}

void add_schema_options(CLI::App* cmd, SchemaOptions& s, bool predictors_required) {
    cmd->add_option("--data", s.data, "CSV file")->required();
    cmd->add_option("--outcome", s.outcome, "Outcome column")->required();
    auto* p = cmd->add_option("--predictors", s.predictors, "Predictor columns (space or comma separated)")
                  ->delimiter(',');
    if (predictors_required) p->required();
    cmd->add_option("--delimiter", s.delimiter, "Field delimiter")->capture_default_str();
    cmd->add_flag("--no-header", s.no_header, "The file has no header row; columns are named 1, 2, ...");
    cmd->add_option("--scale", s.scale, "Multiplier applied to every numeric field")->capture_default_str();
}

pir::CsvSchema to_schema(const SchemaOptions& s) {
    if (s.delimiter.size() != 1) throw pir::ValidationError("--delimiter must be a single character");
    pir::CsvSchema schema;
    schema.outcome_column = s.outcome;
    schema.predictor_columns = s.predictors;
    schema.delimiter = s.delimiter[0];
    schema.has_header = !s.no_header;
    schema.unit_scale = s.scale;
    schema.validate();
    return schema;
}

pir::Level to_level(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw pir::ValidationError("--level must lie strictly between 0 and 1, got " + std::to_string(gamma));
    }
    return pir::Level(gamma);
}

Format to_format(const std::string& f) {
    if (f == "csv") return Format::Csv;
    if (f == "json") return Format::Json;
    return Format::Text;
}

void emit(const std::string& content, const std::string& path) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw pir::IngestionError("cannot write '" + path + "'");
    f << content;
}

std::string beta_name(std::size_t j) { return "beta" + std::to_string(j); }

// ---- commands ---------------------------------------------------------------

Table fit_table(const pir::Dataset& data) {
    const pir::DesignMatrix design = pir::build_design(data);
    const pir::FitResult fit = pir::fit_ols(design, data.y);
    Table t;
    t.record = true;
    std::vector<Cell> row;
    t.columns.push_back("n");
    row.push_back(count(fit.n));
    t.columns.push_back("p");
    row.push_back(count(fit.p));
    for (Eigen::Index j = 0; j <= fit.p; ++j) {
        t.columns.push_back(beta_name(static_cast<std::size_t>(j)));
        row.push_back(num(fit.beta_hat(j)));
    }
    for (auto [name, v] : std::vector<std::pair<std::string, double>>{{"sigma_eps", fit.sigma_eps_unbiased()},
                                                                       {"sigma_y", fit.sigma_y_unbiased()},
                                                                       {"mu_y", fit.mu_y_hat},
                                                                       {"r2", fit.r2},
                                                                       {"r2_adj", fit.r2_adj}}) {
        t.columns.push_back(name);
        row.push_back(num(v));
    }
    t.rows.push_back(std::move(row));
    return t;
}

Table predict_table(const pir::Dataset& data, const std::vector<double>& at, pir::Level level, const std::string& method) {
    const pir::DesignMatrix design = pir::build_design(data);
    const pir::FitResult fit = pir::fit_ols(design, data.y);
    const auto p = static_cast<std::size_t>(fit.p);
    if (p == 0) throw pir::ValidationError("predict needs at least one predictor");
    if (at.empty() || at.size() % p != 0) {
        throw pir::ValidationError("--at needs a multiple of " + std::to_string(p) + " values (one per predictor)");
    }
    Table t;
    for (const auto& name : data.predictor_names) t.columns.push_back(name);
    for (const char* c : {"center", "lower", "upper", "width", "level", "method"}) t.columns.push_back(c);
    for (std::size_t k = 0; k < at.size(); k += p) {
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(at.data() + k, static_cast<Eigen::Index>(p));
        const pir::Interval iv = method == "exact" ? pir::pi_exact(fit, x, level) : pir::pi_approx(fit, x, level);
        std::vector<Cell> row;
        for (std::size_t j = 0; j < p; ++j) row.push_back(num(at[k + j], -1));
        row.push_back(num(iv.center));
        row.push_back(num(iv.lower));
        row.push_back(num(iv.upper));
        row.push_back(num(iv.width()));
        row.push_back(num(level.gamma(), -1));
        row.push_back(str(std::string(pir::to_string(iv.method))));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table pir_table_cmd(const pir::Dataset& data, pir::Level level) {
    const pir::DesignMatrix design = pir::build_design(data);
    const pir::FitResult fit = pir::fit_ols(design, data.y);
    const pir::PirReport r = pir::pir_report(fit, design, level);
    Table t;
    t.record = true;
    t.columns = {"n",        "p",           "level",           "pir_s",          "pir_tilde",
                 "pir_hat",  "r2",          "r2_adj",          "width_mpi_exact", "mean_width_pi_exact",
                 "width_mpi_approx", "width_pi_approx", "warning"};
    t.rows.push_back({count(fit.n), count(fit.p), num(level.gamma(), -1), num(r.pir_s), num(r.pir_tilde),
                      num(r.pir_hat), num(fit.r2), num(fit.r2_adj), num(r.width_mpi_exact),
                      num(r.mean_width_pi_exact), num(r.width_mpi_approx), num(r.width_pi_approx),
                      str(r.pir_tilde_negative ? "adjusted R^2 is negative; pir_tilde < 0" : "")});
    return t;
}

Table table_cmd(const std::vector<double>& rhos, std::optional<int> precision_override) {
    const auto rows = pir::pir_table(rhos);
    Table t;
    t.columns = {"rho", "rho2", "pir"};
    for (const auto& row : rows) {
        const auto ref = pir::reference_table_decimals(row.rho);
        int d_r2 = 2;
        int d_pir = 2;
        if (precision_override) {
            d_r2 = d_pir = *precision_override;
        } else if (ref) {
            d_r2 = ref->rho2;
            d_pir = ref->pir;
        }
        t.rows.push_back({num(row.rho, -1), num(row.rho2, d_r2), num(row.pir, d_pir)});
    }
    return t;
}

Table coverage_cmd(const pir::Dataset& data, pir::Level level, const std::string& method) {
    const std::vector<double> y(data.y.data(), data.y.data() + data.y.size());
    if (y.empty()) throw pir::InsufficientDataError("coverage: the dataset has no rows");
    std::vector<pir::Interval> intervals;
    if (method == "pi-exact" || method == "pi-approx") {
        const pir::DesignMatrix design = pir::build_design(data);
        const pir::FitResult fit = pir::fit_ols(design, data.y);
        for (Eigen::Index i = 0; i < fit.n; ++i) {
            const Eigen::VectorXd x = design.predictor_row(i);
            intervals.push_back(method == "pi-exact" ? pir::pi_exact(fit, x, level) : pir::pi_approx(fit, x, level));
        }
    } else {
        const pir::Interval iv = method == "mpi-exact"    ? pir::mpi_exact(data.y, level)
                                 : method == "mpi-approx" ? pir::mpi_approx(data.y, level)
                                                          : pir::mpi_empirical(data.y, level);
        intervals.assign(y.size(), iv);
    }
    const std::size_t hits = pir::coverage_count(intervals, y);
    Table t;
    t.record = true;
    t.columns = {"method", "level", "covered", "n", "fraction"};
    t.rows.push_back({str(std::string(pir::to_string(intervals.front().method))), num(level.gamma(), -1),
                      count(static_cast<long long>(hits)), count(static_cast<long long>(y.size())),
                      num(static_cast<double>(hits) / static_cast<double>(y.size()))});
    return t;
}

Table simulate_summary(const pir::SimulationResult& result) {
    Table t;
    t.columns = {"rho_x", "p", "rho2", "n", "estimator", "population_pir", "min", "q1", "median", "q3", "max", "mean", "missing"};
    for (const auto& c : result.cells) {
        const std::pair<const char*, const pir::BoxplotStats*> est[] = {
            {"pir_s", &c.pir_s}, {"pir_tilde", &c.pir_tilde}, {"pir_hat", &c.pir_hat}};
        for (const auto& [name, s] : est) {
            t.rows.push_back({num(c.key.rho_x, -1), count(c.key.p), num(c.key.rho2, -1), count(c.key.n), str(name),
                              num(c.population_pir), num(s->min), num(s->q1), num(s->median), num(s->q3),
                              num(s->max), num(s->mean), count(static_cast<long long>(c.estimates.missing))});
        }
    }
    return t;
}

std::string replications_csv(const pir::SimulationResult& result) {
    std::string out = "n,p,rho2,rho_x,replication,estimator,value\n";
    char buf[160];
    for (const auto& c : result.cells) {
        const std::pair<const char*, const std::vector<double>*> est[] = {
            {"pir_s", &c.estimates.pir_s}, {"pir_tilde", &c.estimates.pir_tilde}, {"pir_hat", &c.estimates.pir_hat}};
        for (const auto& [name, values] : est) {
            for (std::size_t r = 0; r < values->size(); ++r) {
                const double v = (*values)[r];
                if (std::isnan(v)) {
                    std::snprintf(buf, sizeof buf, "%d,%d,%.15g,%.15g,%zu,%s,NA\n", c.key.n, c.key.p, c.key.rho2,
                                  c.key.rho_x, r, name);
                } else {
                    std::snprintf(buf, sizeof buf, "%d,%d,%.15g,%.15g,%zu,%s,%.17g\n", c.key.n, c.key.p, c.key.rho2,
                                  c.key.rho_x, r, name, v);
                }
                out += buf;
            }
        }
    }
    return out;
}

void add_quantity(Table& t, std::vector<Cell>& row, const std::string& name, Cell c) {
    t.columns.push_back(name);
    row.push_back(std::move(c));
}

Table example_table(const pir::ExampleReport& r) {
    Table t;
    t.record = true;
    std::vector<Cell> row;
    add_quantity(t, row, "n", count(r.n));
    add_quantity(t, row, "beta0", num(r.beta0));
    add_quantity(t, row, "beta1", num(r.beta1));
    add_quantity(t, row, "sigma_eps", num(r.sigma_eps));
    add_quantity(t, row, "sigma_y", num(r.sigma_y));
    add_quantity(t, row, "mu_y", num(r.mu_y));
    add_quantity(t, row, "rho_hat", num(r.rho_hat));
    add_quantity(t, row, "r2", num(r.r2));
    add_quantity(t, row, "r2_adj", num(r.r2_adj));
    auto interval = [&](const std::string& prefix, const pir::Interval& iv) {
        add_quantity(t, row, prefix + "_lower", num(iv.lower));
        add_quantity(t, row, prefix + "_upper", num(iv.upper));
    };
    for (const auto& [x, iv] : r.pi_approx) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", x);
        interval(std::string("pi_approx_") + buf, iv);
    }
    for (const auto& [x, iv] : r.pi_exact) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", x);
        interval(std::string("pi_exact_") + buf, iv);
    }
    interval("mpi_approx", r.mpi_approx);
    interval("mpi_exact", r.mpi_exact);
    add_quantity(t, row, "conditional_covered", count(static_cast<long long>(r.conditional_hits)));
    add_quantity(t, row, "marginal_covered", count(static_cast<long long>(r.marginal_hits)));
    add_quantity(t, row, "width_pi_approx", num(r.pir.width_pi_approx));
    add_quantity(t, row, "width_mpi_approx", num(r.pir.width_mpi_approx));
    add_quantity(t, row, "pir_s", num(r.pir.pir_s));
    add_quantity(t, row, "pir_tilde", num(r.pir.pir_tilde));
    add_quantity(t, row, "pir_hat", num(r.pir.pir_hat));
    t.rows.push_back(std::move(row));
    return t;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PIR_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw pir::ValidationError("PIR_SEED must be an unsigned integer");
        }
    }
    return pir::SimulationSpec{}.seed;
}

std::string default_fixture_path() {
    if (const char* env = std::getenv("PIR_FATHERSON_CSV")) return env;
    return "data/fatherson.csv";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prediction interval reduction (PIR) for linear models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pir 1.0.0");

    OutputOptions out;
    SchemaOptions schema;
    double level = 0.95;

    auto* fit_cmd = app.add_subcommand("fit", "Least-squares fit: coefficients, spreads, R^2 and adjusted R^2");
    add_schema_options(fit_cmd, schema, false);
    add_output_options(fit_cmd, out);

    std::vector<double> at;
    std::string predict_method = "exact";
    auto* predict_cmd = app.add_subcommand("predict", "Prediction intervals at given predictor values");
    add_schema_options(predict_cmd, schema, true);
    add_output_options(predict_cmd, out);
    predict_cmd->add_option("--at", at, "Predictor values; p values per point")->required()->delimiter(',');
    predict_cmd->add_option("--level", level, "Nominal level gamma")->capture_default_str();
    predict_cmd->add_option("--method", predict_method, "Interval construction")
        ->check(CLI::IsMember({"exact", "approx"}))
        ->capture_default_str();

    auto* pir_cmd = app.add_subcommand("pir", "The three sample PIR estimates and the widths behind them");
    add_schema_options(pir_cmd, schema, true);
    add_output_options(pir_cmd, out);
    pir_cmd->add_option("--level", level, "Nominal level gamma")->capture_default_str();

    std::vector<double> rhos;
    bool table_default = false;
    auto* table_cmd_app = app.add_subcommand("table", "Population rho -> rho^2 -> PIR table");
    add_output_options(table_cmd_app, out);
    auto* rho_opt = table_cmd_app->add_option("--rho", rhos, "Correlations in [0,1]")->delimiter(',');
    table_cmd_app->add_flag("--default", table_default, "The 17 reference correlations")->excludes(rho_opt);

    std::string coverage_method = "pi-exact";
    auto* coverage_cmd_app = app.add_subcommand("coverage", "How many observed outcomes fall inside their intervals");
    add_schema_options(coverage_cmd_app, schema, false);
    add_output_options(coverage_cmd_app, out);
    coverage_cmd_app->add_option("--level", level, "Nominal level gamma")->capture_default_str();
    coverage_cmd_app->add_option("--method", coverage_method, "Interval construction")
        ->check(CLI::IsMember({"pi-exact", "pi-approx", "mpi-exact", "mpi-approx", "mpi-empirical"}))
        ->capture_default_str();

    pir::SimulationSpec sim;
    sim.rho_x_values = {0.0};
    std::string sigma_mode = "derived";
    std::optional<std::uint64_t> seed_flag;
    std::string svg_path;
    std::string reps_path;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo study of the PIR estimators");
    add_output_options(sim_cmd, out);
    sim_cmd->add_option("--n", sim.n_values, "Sample sizes")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--p", sim.p_values, "Numbers of predictors")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--rho2", sim.rho2_values, "Target coefficients of determination")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--rho-x", sim.rho_x_values, "Predictor equicorrelations")->delimiter(',')->capture_default_str();
    sim_cmd->add_option("--reps", sim.replications, "Replications per cell")->capture_default_str();
    sim_cmd->add_option("--seed", seed_flag, "Seed (default: $PIR_SEED, else built-in)");
    sim_cmd->add_option("--level", level, "Nominal level gamma")->capture_default_str();
    sim_cmd->add_option("--sigma-mode", sigma_mode, "Residual variance calibration")
        ->check(CLI::IsMember({"derived", "as-printed"}))
        ->capture_default_str();
    sim_cmd->add_option("--threads", sim.workers, "Worker threads (0: all cores)")->capture_default_str();
    sim_cmd->add_option("--svg", svg_path, "Write a boxplot grid to this SVG file");
    sim_cmd->add_option("--replications-csv", reps_path, "Write every replication's estimates to this CSV file");

    std::string fixture = default_fixture_path();
    std::string crc_hex;
    auto* example_cmd = app.add_subcommand("example", "Father/son heights worked example");
    add_output_options(example_cmd, out);
    example_cmd->add_option("--data", fixture, "father.son CSV (fheight,sheight in inches)")->capture_default_str();
    example_cmd->add_option("--crc32", crc_hex, "Refuse the file unless its CRC-32 matches (hex)");
    example_cmd->add_option("--level", level, "Nominal level gamma")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const Renderer renderer(out.precision);
        const Format format = to_format(out.format);
        std::string rendered;

        if (*fit_cmd) {
            rendered = renderer.render(fit_table(pir::read_csv(schema.data, to_schema(schema))), format);
        } else if (*predict_cmd) {
            const pir::Level lv = to_level(level);
            rendered = renderer.render(predict_table(pir::read_csv(schema.data, to_schema(schema)), at, lv, predict_method), format);
        } else if (*pir_cmd) {
            const pir::Level lv = to_level(level);
            rendered = renderer.render(pir_table_cmd(pir::read_csv(schema.data, to_schema(schema)), lv), format);
        } else if (*table_cmd_app) {
            const std::vector<double>& list = rhos.empty() ? pir::default_table_rhos() : rhos;
            for (double r : list) {
                if (!(r >= 0.0 && r <= 1.0)) throw pir::ValidationError("--rho values must lie in [0,1]");
            }
            const bool precision_given = table_cmd_app->get_option("--precision")->count() > 0;
            rendered = renderer.render(table_cmd(list, precision_given ? std::optional<int>(out.precision) : std::nullopt), format);
        } else if (*coverage_cmd_app) {
            const pir::Level lv = to_level(level);
            rendered = renderer.render(coverage_cmd(pir::read_csv(schema.data, to_schema(schema)), lv, coverage_method), format);
        } else if (*sim_cmd) {
            sim.level = to_level(level);
            sim.seed = seed_flag ? *seed_flag : default_seed();
            sim.sigma_mode = sigma_mode == "as-printed" ? pir::SigmaMode::AsPrinted : pir::SigmaMode::Derived;
            const pir::SimulationResult result = pir::run(sim);
            rendered = renderer.render(simulate_summary(result), format);
            if (!reps_path.empty()) emit(replications_csv(result), reps_path);
            if (!svg_path.empty()) emit(pir::render_boxplot_grid(result), svg_path);
        } else if (*example_cmd) {
            const pir::Level lv = to_level(level);
            std::optional<std::uint32_t> crc;
            if (!crc_hex.empty()) {
                try {
                    crc = static_cast<std::uint32_t>(std::stoul(crc_hex, nullptr, 16));
                } catch (const std::exception&) {
                    throw pir::ValidationError("--crc32 must be a hexadecimal number");
                }
            }
            rendered = renderer.render(example_table(pir::validate_example(pir::load_father_son(fixture, crc), lv)), format);
        }
        emit(rendered, out.out);
        return 0;
    } catch (const pir::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pir::IngestionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const pir::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
}
