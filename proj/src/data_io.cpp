#include "confdet/data_io.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "confdet/errors.hpp"
#include "confdet/rng.hpp"

namespace confdet {

namespace {

std::string format_number(double v) {
    // Shortest representation that parses back exactly.
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no, const std::string& column) {
    if (cell.empty())
        throw DataError("missing cell at row " + std::to_string(line_no) + ", column '" + column +
                        "'");
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
        if (std::isnan(v)) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw DataError("non-numeric cell \"" + cell + "\" at row " + std::to_string(line_no) +
                        ", column '" + column + "'");
    }
}

ColumnKind infer_kind(const std::vector<double>& values) {
    for (double v : values)
        if (v != 0.0 && v != 1.0) return ColumnKind::Continuous;
    return ColumnKind::Binary;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> non_empty_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::istringstream is(content);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

MultiEnvDataset parse_multi_env_csv(const std::string& content) {
    const auto lines = non_empty_lines(content);
    if (lines.empty()) throw DataError("empty dataset file");
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 3 || header[0] != "env" || header[1] != "t" || header[2] != "y")
        throw DataError("dataset header must start with env,t,y");
    const int n_x = static_cast<int>(header.size()) - 3;

    MultiEnvDataset ds;
    ds.x_kinds.assign(static_cast<std::size_t>(n_x), ColumnKind::Continuous);
    std::map<std::string, std::size_t> env_index;
    std::vector<double> all_t, all_y;
    std::vector<std::vector<double>> all_x(static_cast<std::size_t>(n_x));

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto cells = split_csv_line(lines[li]);
        if (cells.size() != header.size())
            throw DataError("row " + std::to_string(li + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        const std::string& env = cells[0];
        if (env.empty()) throw DataError("missing env id at row " + std::to_string(li + 1));
        auto [it, inserted] = env_index.emplace(env, ds.envs.size());
        if (inserted) {
            EnvBlock block;
            block.env_id = env;
            block.x_cols.resize(static_cast<std::size_t>(n_x));
            ds.envs.push_back(std::move(block));
        }
        EnvBlock& block = ds.envs[it->second];
        const double t = parse_cell(cells[1], li + 1, "t");
        const double y = parse_cell(cells[2], li + 1, "y");
        block.t.push_back(t);
        block.y.push_back(y);
        all_t.push_back(t);
        all_y.push_back(y);
        for (int c = 0; c < n_x; ++c) {
            const double v = parse_cell(cells[static_cast<std::size_t>(3 + c)], li + 1,
                                        header[static_cast<std::size_t>(3 + c)]);
            block.x_cols[static_cast<std::size_t>(c)].push_back(v);
            all_x[static_cast<std::size_t>(c)].push_back(v);
        }
    }
    if (ds.envs.empty()) throw DataError("dataset has no data rows");
    if (ds.envs.size() < 2)
        throw UsageError("dataset has a single environment; multi-environment data required");

    ds.t_kind = infer_kind(all_t);
    ds.y_kind = infer_kind(all_y);
    for (int c = 0; c < n_x; ++c)
        ds.x_kinds[static_cast<std::size_t>(c)] = infer_kind(all_x[static_cast<std::size_t>(c)]);
    ds.validate();
    return ds;
}

MultiEnvDataset load_multi_env_csv(const std::string& path) {
    return parse_multi_env_csv(read_file(path));
}

std::string multi_env_csv_string(const MultiEnvDataset& ds) {
    std::ostringstream os;
    os << "env,t,y";
    for (int c = 1; c <= ds.n_covariates(); ++c) os << ",x" << c;
    os << '\n';
    for (const auto& env : ds.envs)
        for (int i = 0; i < env.n_obs(); ++i) {
            os << env.env_id << ',' << format_number(env.t[static_cast<std::size_t>(i)]) << ','
               << format_number(env.y[static_cast<std::size_t>(i)]);
            for (const auto& col : env.x_cols)
                os << ',' << format_number(col[static_cast<std::size_t>(i)]);
            os << '\n';
        }
    return os.str();
}

void write_multi_env_csv(const MultiEnvDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << multi_env_csv_string(ds);
}

int CovariateTable::n_envs() const {
    std::vector<std::string> ids = env_ids;
    std::sort(ids.begin(), ids.end());
    return static_cast<int>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

void CovariateTable::validate() const {
    for (const auto& col : columns)
        if (col.size() != env_ids.size()) throw DataError("covariate column length mismatch");
    if (columns.size() != column_names.size())
        throw DataError("covariate name/column count mismatch");
    if (n_envs() < 2) throw UsageError("covariate table needs >= 2 distinct environments");
}

CovariateTable CovariateTable::filtered(double min_variance, bool drop_binary) const {
    CovariateTable out;
    out.env_ids = env_ids;
    const double n = static_cast<double>(n_rows());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& col = columns[c];
        if (drop_binary) {
            bool binary = true;
            for (double v : col) binary &= v == 0.0 || v == 1.0;
            if (binary) continue;
        }
        double mean = 0;
        for (double v : col) mean += v;
        mean /= n;
        double var = 0;
        for (double v : col) var += (v - mean) * (v - mean);
        var /= n;
        if (var <= min_variance || var <= 0) continue;
        out.column_names.push_back(column_names[c]);
        out.columns.push_back(col);
    }
    return out;
}

CovariateTable parse_covariate_csv(const std::string& content) {
    const auto lines = non_empty_lines(content);
    if (lines.empty()) throw DataError("empty covariate file");
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "env")
        throw DataError("covariate header must be env,<name>,...");
    CovariateTable table;
    table.column_names.assign(header.begin() + 1, header.end());
    table.columns.resize(table.column_names.size());
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto cells = split_csv_line(lines[li]);
        if (cells.size() != header.size())
            throw DataError("row " + std::to_string(li + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        if (cells[0].empty()) throw DataError("missing env id at row " + std::to_string(li + 1));
        table.env_ids.push_back(cells[0]);
        for (std::size_t c = 1; c < cells.size(); ++c)
            table.columns[c - 1].push_back(parse_cell(cells[c], li + 1, header[c]));
    }
    table.validate();
    return table;
}

CovariateTable load_covariate_csv(const std::string& path) {
    return parse_covariate_csv(read_file(path));
}

std::string covariate_csv_string(const CovariateTable& table) {
    std::ostringstream os;
    os << "env";
    for (const auto& name : table.column_names) os << ',' << name;
    os << '\n';
    for (int r = 0; r < table.n_rows(); ++r) {
        os << table.env_ids[static_cast<std::size_t>(r)];
        for (const auto& col : table.columns)
            os << ',' << format_number(col[static_cast<std::size_t>(r)]);
        os << '\n';
    }
    return os.str();
}

CovariateTable make_demo_covariates(int n_envs, int rows_per_env, int n_cols,
                                    std::uint64_t seed) {
    if (n_envs < 2 || rows_per_env < 1 || n_cols < 1)
        throw UsageError("make_demo_covariates: need >= 2 envs, >= 1 row, >= 1 column");
    CovariateTable table;
    for (int c = 0; c < n_cols; ++c) table.column_names.push_back("c" + std::to_string(c + 1));
    table.columns.resize(static_cast<std::size_t>(n_cols));

    int width = 1;
    for (int v = n_envs - 1; v >= 10; v /= 10) ++width;
    Rng root(seed);
    for (int e = 0; e < n_envs; ++e) {
        Rng rng = root.stream({static_cast<std::uint64_t>(e)});
        std::string id = std::to_string(e);
        id.insert(0, static_cast<std::size_t>(width) - std::min<std::size_t>(
                                                           static_cast<std::size_t>(width),
                                                           id.size()),
                  '0');
        // Environment shifts load mostly on a shared severity factor (real
        // registries drift along common socioeconomic axes), with a small
        // independent part per column. Within-environment spread is modest
        // relative to the shifts, as for region-level covariates.
        const double severity = rng.normal();
        std::vector<double> mu(static_cast<std::size_t>(n_cols));
        std::vector<double> sc(static_cast<std::size_t>(n_cols));
        for (int c = 0; c < n_cols; ++c) {
            mu[static_cast<std::size_t>(c)] = 0.9 * severity + 0.35 * rng.normal();
            sc[static_cast<std::size_t>(c)] = rng.uniform(0.25, 0.45);
        }
        for (int r = 0; r < rows_per_env; ++r) {
            table.env_ids.push_back(id);
            for (int c = 0; c < n_cols; ++c) {
                double draw;
                switch (c % 3) {
                    case 0: draw = rng.normal(); break;
                    case 1: draw = std::expm1(0.5 * rng.normal()); break;  // skewed
                    default: draw = rng.uniform(-1.7320508, 1.7320508); break;
                }
                table.columns[static_cast<std::size_t>(c)].push_back(
                    mu[static_cast<std::size_t>(c)] + sc[static_cast<std::size_t>(c)] * draw);
            }
        }
    }
    return table;
}

std::vector<double> scale_covariate(const std::vector<double>& column) {
    if (column.empty()) throw DataError("scale_covariate: empty column");
    double lo = column[0], hi = column[0], mean = 0;
    for (double v : column) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v;
    }
    mean /= static_cast<double>(column.size());
    if (!(hi > lo)) throw DataError("scale_covariate: degenerate input, constant column");
    std::vector<double> out;
    out.reserve(column.size());
    for (double v : column) out.push_back(5.0 * (v - mean) / (hi - lo));
    return out;
}

const char* to_string(BasisFn f) {
    switch (f) {
        case BasisFn::Tanh: return "tanh";
        case BasisFn::Identity: return "identity";
        default: return "square";
    }
}

double apply_basis(BasisFn f, double x) {
    switch (f) {
        case BasisFn::Tanh: return std::tanh(x);
        case BasisFn::Identity: return x;
        default: return x * x;
    }
}

void SemiSynthSpec::validate(int available_columns) const {
    if (p < 1 || p > available_columns)
        throw UsageError("semi-synth: p must be in [1, " + std::to_string(available_columns) +
                         "], got " + std::to_string(p));
    if (n_observed < 0 || n_observed > p)
        throw UsageError("semi-synth: n_observed must be in [0, p]");
    if (lambda < 0) throw UsageError("semi-synth: lambda must be >= 0");
    if (!(coef_hi >= coef_lo) || !(delta_hi >= delta_lo))
        throw UsageError("semi-synth: invalid coefficient ranges");
    if (basis.empty()) throw UsageError("semi-synth: empty function basis");
}

std::string trace_to_json(const GenerationTrace& trace) {
    std::ostringstream os;
    auto str_list = [&os](const std::vector<std::string>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << '"' << v[i] << '"';
        os << ']';
    };
    auto num_list = [&os](const std::vector<double>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_number(v[i]);
        os << ']';
    };
    auto fn_list = [&os](const std::vector<BasisFn>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i)
            os << (i ? "," : "") << '"' << to_string(v[i]) << '"';
        os << ']';
    };
    os << "{\"covariates\":";
    str_list(trace.covariates);
    os << ",\"alphas\":";
    num_list(trace.alphas);
    os << ",\"betas\":";
    num_list(trace.betas);
    os << ",\"funcs_f\":";
    fn_list(trace.funcs_f);
    os << ",\"funcs_g\":";
    fn_list(trace.funcs_g);
    os << ",\"delta\":" << format_number(trace.delta);
    os << ",\"lambda\":" << format_number(trace.lambda);
    os << ",\"observed_ids\":";
    str_list(trace.observed);
    os << ",\"seed\":" << trace.seed << "}";
    return os.str();
}

std::pair<MultiEnvDataset, GenerationTrace> generate_semi_synthetic(const CovariateTable& table,
                                                                    const SemiSynthSpec& spec) {
    table.validate();
    spec.validate(table.n_cols());
    // Constant covariates cannot be scaled; check before drawing.
    for (int c = 0; c < table.n_cols(); ++c) {
        const auto& col = table.columns[static_cast<std::size_t>(c)];
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        if (!(*hi > *lo))
            throw DataError("semi-synth: degenerate input, covariate '" +
                            table.column_names[static_cast<std::size_t>(c)] + "' is constant");
    }

    Rng rng(spec.seed);
    std::vector<int> order(static_cast<std::size_t>(table.n_cols()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);
    order.resize(static_cast<std::size_t>(spec.p));

    GenerationTrace trace;
    trace.seed = spec.seed;
    trace.lambda = spec.lambda;
    for (int d = 0; d < spec.p; ++d) {
        trace.covariates.push_back(
            table.column_names[static_cast<std::size_t>(order[static_cast<std::size_t>(d)])]);
        trace.alphas.push_back(rng.uniform(spec.coef_lo, spec.coef_hi));
        trace.funcs_f.push_back(spec.basis[rng.below(spec.basis.size())]);
        trace.betas.push_back(rng.uniform(spec.coef_lo, spec.coef_hi));
        trace.funcs_g.push_back(spec.basis[rng.below(spec.basis.size())]);
    }
    trace.delta = rng.uniform(spec.delta_lo, spec.delta_hi);
    trace.observed.assign(trace.covariates.begin(), trace.covariates.begin() + spec.n_observed);

    std::vector<std::vector<double>> scaled;
    for (int d = 0; d < spec.p; ++d) {
        const auto& raw = table.columns[static_cast<std::size_t>(order[static_cast<std::size_t>(d)])];
        const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
        double mean = 0;
        for (double v : raw) mean += v;
        mean /= static_cast<double>(raw.size());
        trace.scale_mean.push_back(mean);
        trace.scale_range.push_back(*hi - *lo);
        scaled.push_back(scale_covariate(raw));
    }

    const int n = table.n_rows();
    std::vector<double> t(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        double t_val = rng.normal(0.0, spec.noise_sd);
        double y_val = rng.normal(0.0, spec.noise_sd);
        for (int d = 0; d < spec.p; ++d) {
            const double xs = scaled[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)];
            const bool observed = d < spec.n_observed;
            const double beta =
                trace.betas[static_cast<std::size_t>(d)] * (observed ? 1.0 : spec.lambda);
            t_val += trace.alphas[static_cast<std::size_t>(d)] *
                     apply_basis(trace.funcs_f[static_cast<std::size_t>(d)], xs);
            y_val += beta * apply_basis(trace.funcs_g[static_cast<std::size_t>(d)], xs);
        }
        y_val += trace.delta * t_val;
        t[static_cast<std::size_t>(r)] = t_val;
        y[static_cast<std::size_t>(r)] = y_val;
    }

    MultiEnvDataset ds;
    ds.t_kind = ColumnKind::Continuous;
    ds.y_kind = ColumnKind::Continuous;
    ds.x_kinds.assign(static_cast<std::size_t>(spec.n_observed), ColumnKind::Continuous);
    std::map<std::string, std::size_t> env_index;
    for (int r = 0; r < n; ++r) {
        const auto& env = table.env_ids[static_cast<std::size_t>(r)];
        auto [it, inserted] = env_index.emplace(env, ds.envs.size());
        if (inserted) {
            EnvBlock block;
            block.env_id = env;
            block.x_cols.resize(static_cast<std::size_t>(spec.n_observed));
            ds.envs.push_back(std::move(block));
        }
        EnvBlock& block = ds.envs[it->second];
        block.t.push_back(t[static_cast<std::size_t>(r)]);
        block.y.push_back(y[static_cast<std::size_t>(r)]);
        for (int d = 0; d < spec.n_observed; ++d)
            block.x_cols[static_cast<std::size_t>(d)].push_back(
                scaled[static_cast<std::size_t>(d)][static_cast<std::size_t>(r)]);
    }
    ds.validate();
    return {std::move(ds), std::move(trace)};
}

double estimate_env_ate_bias(const MultiEnvDataset& data, const GenerationTrace& trace) {
    data.validate();
    const int p = data.n_covariates();
    double sum = 0;
    int used = 0;
    for (const auto& env : data.envs) {
        const int n = env.n_obs();
        if (n <= p + 2) continue;  // not enough rows to fit the regression
        Eigen::MatrixXd design(n, p + 2);
        Eigen::VectorXd response(n);
        for (int i = 0; i < n; ++i) {
            design(i, 0) = 1.0;
            design(i, 1) = env.t[static_cast<std::size_t>(i)];
            for (int c = 0; c < p; ++c)
                design(i, 2 + c) = env.x_cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
            response(i) = env.y[static_cast<std::size_t>(i)];
        }
        const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(response);
        sum += coef(1) - trace.delta;
        ++used;
    }
    if (used == 0)
        throw DataError("estimate_env_ate_bias: every environment has too few observations");
    return sum / static_cast<double>(used);
}

}  // namespace confdet
