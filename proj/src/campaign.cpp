#include "rcm/campaign.hpp"

#include "rcm/errors.hpp"
#include "rcm/rng.hpp"
#include "rcm/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace rcm {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v)
{
    if (!std::isfinite(v))
        return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError(where + it.key(), "unknown key");
}

double get_number(const json& obj, const std::string& key, const std::string& where)
{
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(where + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw ConfigError(where + key, "expected a finite number");
    return d;
}

std::vector<double> get_number_list(const json& obj, const std::string& key)
{
    if (!obj.contains(key))
        throw ConfigError(key, "missing");
    const auto& v = obj.at(key);
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(get_number(obj, key, ""));
        return out;
    }
    if (!v.is_array() || v.empty())
        throw ConfigError(key, "expected a non-empty list of numbers");
    for (const auto& e : v) {
        if (!e.is_number() || !std::isfinite(e.get<double>()))
            throw ConfigError(key, "expected a non-empty list of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::uint64_t get_unsigned(const json& v, const std::string& key)
{
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(key, "expected a non-negative integer");
}

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t n = 0;

    void add(double v)
    {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : kNaN; }
    double variance() const
    {
        if (n < 2)
            return 0.0;
        const double m = mean();
        return std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    }
    double ci99() const { return n ? kZ99 * std::sqrt(variance() / static_cast<double>(n)) : kNaN; }
};

double proportion_ci99(double p, std::uint64_t n)
{
    return n ? kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : kNaN;
}

} // namespace

std::string_view to_string(CampaignMetric m) noexcept
{
    switch (m) {
    case CampaignMetric::Torus:
        return "torus";
    case CampaignMetric::Square:
        return "square";
    case CampaignMetric::Coupled:
        return "coupled";
    }
    return "torus";
}

CampaignMetric campaign_metric_from_string(std::string_view s)
{
    if (s == "torus")
        return CampaignMetric::Torus;
    if (s == "square")
        return CampaignMetric::Square;
    if (s == "coupled")
        return CampaignMetric::Coupled;
    throw ConfigError("metric", "expected torus, square or coupled");
}

CampaignConfig parse_config(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("<root>", "expected a JSON object");
    reject_unknown(doc, {"model", "rho", "b", "metric", "trials", "seed", "epsilon", "output", "format",
                         "exact", "theory"},
                   "");

    CampaignConfig cfg;
    if (!doc.contains("model") || !doc.at("model").is_object())
        throw ConfigError("model", "missing or not an object");
    const auto& m = doc.at("model");
    reject_unknown(m, {"kind", "sigma_db", "eta", "knots", "table_file", "truncation_epsilon", "cutoff"},
                   "model.");
    if (!m.contains("kind") || !m.at("kind").is_string())
        throw ConfigError("model.kind", "missing or not a string");
    cfg.model.kind = m.at("kind").get<std::string>();
    if (cfg.model.kind == "log_normal") {
        if (!m.contains("sigma_db") || !m.contains("eta"))
            throw ConfigError("model", "log_normal needs sigma_db and eta");
        cfg.model.sigma_db = get_number(m, "sigma_db", "model.");
        cfg.model.eta = get_number(m, "eta", "model.");
        if (!(cfg.model.sigma_db > 0.0))
            throw ConfigError("model.sigma_db", "must be positive");
        if (!(cfg.model.eta > 0.0))
            throw ConfigError("model.eta", "must be positive");
    } else if (cfg.model.kind == "table") {
        if (m.contains("knots")) {
            const auto& ks = m.at("knots");
            if (!ks.is_array() || ks.empty())
                throw ConfigError("model.knots", "expected a non-empty list of [radius, value] pairs");
            for (const auto& k : ks) {
                if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
                    throw ConfigError("model.knots", "expected [radius, value] pairs");
                cfg.model.knots.push_back({k[0].get<double>(), k[1].get<double>()});
            }
        } else if (m.contains("table_file") && m.at("table_file").is_string()) {
            cfg.model.table_file = m.at("table_file").get<std::string>();
        } else {
            throw ConfigError("model", "table needs knots or table_file");
        }
    } else if (cfg.model.kind != "unit_disk" && cfg.model.kind != "gaussian") {
        throw ConfigError("model.kind", "expected unit_disk, gaussian, log_normal or table");
    }
    if (m.contains("truncation_epsilon")) {
        cfg.model.truncation_epsilon = get_number(m, "truncation_epsilon", "model.");
        if (!(*cfg.model.truncation_epsilon > 0.0 && *cfg.model.truncation_epsilon < 1.0))
            throw ConfigError("model.truncation_epsilon", "must lie in (0, 1)");
    }
    if (m.contains("cutoff")) {
        cfg.model.cutoff = get_number(m, "cutoff", "model.");
        if (!(*cfg.model.cutoff > 0.0))
            throw ConfigError("model.cutoff", "must be positive");
    }

    cfg.rho_list = get_number_list(doc, "rho");
    for (double r : cfg.rho_list)
        if (!(r > 0.0))
            throw ConfigError("rho", "densities must be positive");
    cfg.b_list = get_number_list(doc, "b");

    if (doc.contains("metric")) {
        if (!doc.at("metric").is_string())
            throw ConfigError("metric", "expected a string");
        cfg.metric = campaign_metric_from_string(doc.at("metric").get<std::string>());
    }
    if (!doc.contains("trials"))
        throw ConfigError("trials", "missing");
    cfg.trials = get_unsigned(doc.at("trials"), "trials");
    if (cfg.trials < 1)
        throw ConfigError("trials", "must be at least 1");
    if (doc.contains("seed"))
        cfg.master_seed = get_unsigned(doc.at("seed"), "seed");
    if (doc.contains("epsilon")) {
        cfg.epsilon = get_number(doc, "epsilon", "");
        if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5))
            throw ConfigError("epsilon", "must lie in (0, 1/2)");
    }
    if (doc.contains("output")) {
        if (!doc.at("output").is_string())
            throw ConfigError("output", "expected a path string");
        cfg.output_path = doc.at("output").get<std::string>();
    }
    if (doc.contains("format")) {
        const auto& f = doc.at("format");
        if (!f.is_string() || (f != "csv" && f != "json"))
            throw ConfigError("format", "expected csv or json");
        cfg.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    }
    if (doc.contains("exact")) {
        if (!doc.at("exact").is_boolean())
            throw ConfigError("exact", "expected true or false");
        cfg.exact = doc.at("exact").get<bool>();
    }
    if (doc.contains("theory")) {
        if (!doc.at("theory").is_boolean())
            throw ConfigError("theory", "expected true or false");
        cfg.theory = doc.at("theory").get<bool>();
    }
    return cfg;
}

CampaignConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

ConnectionModel build_model(const ModelSpec& spec, const std::filesystem::path& base_dir)
{
    ModelOptions opt;
    if (spec.truncation_epsilon)
        opt.truncation_epsilon = *spec.truncation_epsilon;
    opt.cutoff = spec.cutoff;
    if (spec.kind == "unit_disk")
        return ConnectionModel::unit_disk(opt);
    if (spec.kind == "gaussian")
        return ConnectionModel::gaussian(opt);
    if (spec.kind == "log_normal")
        return ConnectionModel::log_normal(spec.sigma_db, spec.eta, opt);
    if (spec.kind == "table") {
        if (!spec.knots.empty())
            return ConnectionModel::table(spec.knots, opt);
        std::filesystem::path p = spec.table_file;
        if (p.is_relative() && !base_dir.empty())
            p = base_dir / p;
        std::ifstream in(p);
        if (!in)
            throw IoError("cannot open table file " + p.string());
        return ConnectionModel::load_table(in, opt);
    }
    throw ConfigError("model.kind", "unknown kind '" + spec.kind + "'");
}

std::uint64_t cell_seed(std::uint64_t master_seed, double rho, double b) noexcept
{
    std::uint64_t h = rng::combine(master_seed, std::bit_cast<std::uint64_t>(rho));
    return rng::combine(h, std::bit_cast<std::uint64_t>(b));
}

void summarise(CellSummary& cell, const std::vector<TrialRow>& rows)
{
    Accumulator iso, deg, boundary;
    std::uint64_t none = 0, connected = 0;
    std::vector<std::size_t> counts;
    counts.reserve(rows.size());
    for (const auto& row : rows) {
        const auto& r = row.record;
        iso.add(static_cast<double>(r.isolated));
        deg.add(r.mean_degree);
        none += r.isolated == 0;
        connected += r.connected;
        counts.push_back(r.isolated);
        if (r.coupling)
            boundary.add(static_cast<double>(r.coupling->isolated_boundary));
    }
    const std::uint64_t n = rows.size();
    cell.trials = n;
    cell.mean_isolated = iso.mean();
    cell.var_isolated = iso.variance();
    cell.ci99_isolated = iso.ci99();
    cell.p_no_isolated = n ? static_cast<double>(none) / static_cast<double>(n) : kNaN;
    cell.ci99_p_no_isolated = proportion_ci99(cell.p_no_isolated, n);
    cell.frac_connected = n ? static_cast<double>(connected) / static_cast<double>(n) : kNaN;
    cell.ci99_connected = proportion_ci99(cell.frac_connected, n);
    cell.mean_degree = deg.mean();
    cell.ci99_degree = deg.ci99();
    cell.mean_isolated_boundary = boundary.n ? boundary.mean() : kNaN;
    cell.ci99_isolated_boundary = boundary.n ? boundary.ci99() : kNaN;

    cell.tv_to_poisson = kNaN;
    if (cell.theory_ok && cell.theory.expected_isolated > 0.0 && n > 0) {
        const auto emp = empirical_distribution(counts);
        const auto po = poisson_pmf_until(cell.theory.expected_isolated);
        cell.tv_to_poisson = tv_distance(emp, po);
    }
}

CampaignResult run_campaign(const CampaignConfig& config, const ConnectionModel& model,
                            const RunOptions& opt)
{
    auto shared_model = std::make_shared<const ConnectionModel>(model);
    CampaignResult result;

    struct Cell {
        SampleParams params;
        std::size_t first_row = 0;
        bool skipped = false;
    };
    std::vector<Cell> cells;
    for (double rho : config.rho_list) {
        for (double b : config.b_list) {
            CellSummary summary;
            summary.rho = rho;
            summary.b = b;
            summary.metric = config.metric;
            summary.epsilon = config.epsilon;

            Cell cell;
            cell.params.rho = rho;
            cell.params.b = b;
            cell.params.model = shared_model;
            cell.params.metric = config.metric == CampaignMetric::Square ? Metric::Square : Metric::Torus;
            cell.params.master_seed = cell_seed(config.master_seed, rho, b);
            cell.params.exact = config.exact;
            try {
                cell.params.validate();
            } catch (const ParameterError& e) {
                cell.skipped = true;
                summary.skipped = true;
                summary.reason = e.what();
                std::ostringstream w;
                w << "skipping cell rho=" << fmt17(rho) << " b=" << fmt17(b) << ": " << e.what();
                result.warnings.push_back(w.str());
            }
            if (!cell.skipped) {
                cell.first_row = result.rows.size();
                result.rows.resize(result.rows.size() + config.trials);
            }
            cells.push_back(cell);
            result.cells.push_back(summary);
        }
    }

    // one work unit per (cell, trial); each writes only its own preallocated row
    std::vector<std::pair<std::size_t, std::uint64_t>> units;
    for (std::size_t c = 0; c < cells.size(); ++c)
        if (!cells[c].skipped)
            for (std::uint64_t t = 0; t < config.trials; ++t)
                units.emplace_back(c, t);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t u = next.fetch_add(1);
            if (u >= units.size())
                return;
            const auto [c, t] = units[u];
            try {
                SampleParams p = cells[c].params;
                p.trial_index = t;
                TrialRow& row = result.rows[cells[c].first_row + t];
                row.rho = p.rho;
                row.b = p.b;
                row.metric = config.metric;
                if (config.metric == CampaignMetric::Coupled) {
                    const auto coupled = couple_torus_to_square(p);
                    row.record = trial_statistics(coupled);
                    if (opt.dump_dir) {
                        std::ofstream out(*opt.dump_dir / ("cell" + std::to_string(c) + "_trial" +
                                                           std::to_string(t) + ".txt"));
                        write_edge_list(out, coupled.square_graph);
                    }
                } else {
                    const auto sample = build_graph(p, sample_points(p));
                    row.record = trial_statistics(sample);
                    if (opt.dump_dir) {
                        std::ofstream out(*opt.dump_dir / ("cell" + std::to_string(c) + "_trial" +
                                                           std::to_string(t) + ".txt"));
                        write_edge_list(out, sample);
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(units.size());
            }
        }
    };
    const unsigned workers = std::max(1u, opt.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellSummary& summary = result.cells[c];
        if (cells[c].skipped)
            continue;
        if (config.theory) {
            const Metric m = config.metric == CampaignMetric::Torus ? Metric::Torus : Metric::Square;
            try {
                summary.theory = theory_report(model, summary.rho, summary.b, m);
                summary.theory_ok = true;
            } catch (const std::exception& e) {
                summary.theory_note = e.what();
            }
            try {
                ChenSteinParams csp;
                csp.epsilon = config.epsilon;
                summary.chen_stein = chen_stein_terms(model, summary.rho, summary.b, csp);
                summary.chen_stein_ok = true;
            } catch (const std::exception& e) {
                if (summary.theory_note.empty())
                    summary.theory_note = e.what();
            }
        }
        const std::vector<TrialRow> rows(result.rows.begin() + static_cast<std::ptrdiff_t>(cells[c].first_row),
                                         result.rows.begin() +
                                             static_cast<std::ptrdiff_t>(cells[c].first_row + config.trials));
        summarise(summary, rows);
    }
    return result;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows)
{
    out << "rho,b,metric,trial,n_points,n_edges,isolated,n_components,connected,mean_degree,"
           "isolated_torus,isolated_square,isolated_boundary\n";
    for (const auto& row : rows) {
        const auto& r = row.record;
        out << fmt17(row.rho) << ',' << fmt17(row.b) << ',' << to_string(row.metric) << ','
            << r.trial_index << ',' << r.n_points << ',' << r.n_edges << ',' << r.isolated << ','
            << r.n_components << ',' << (r.connected ? 1 : 0) << ',' << fmt17(r.mean_degree) << ',';
        if (r.coupling)
            out << r.coupling->isolated_torus << ',' << r.coupling->isolated_square << ','
                << r.coupling->isolated_boundary;
        else
            out << ",,";
        out << '\n';
    }
}

std::vector<TrialRow> read_trials_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) ||
        line != "rho,b,metric,trial,n_points,n_edges,isolated,n_components,connected,mean_degree,"
                "isolated_torus,isolated_square,isolated_boundary")
        throw IoError("trial table header does not match the expected schema");
    std::vector<TrialRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        for (;;) {
            const auto comma = line.find(',', pos);
            f.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (f.size() != 13)
            throw IoError("trial table line " + std::to_string(lineno) + ": expected 13 fields");
        try {
            TrialRow row;
            row.rho = std::stod(f[0]);
            row.b = std::stod(f[1]);
            row.metric = campaign_metric_from_string(f[2]);
            auto& r = row.record;
            r.trial_index = std::stoull(f[3]);
            r.n_points = std::stoull(f[4]);
            r.n_edges = std::stoull(f[5]);
            r.isolated = std::stoull(f[6]);
            r.n_components = std::stoull(f[7]);
            r.connected = f[8] == "1";
            r.mean_degree = std::stod(f[9]);
            if (!f[10].empty())
                r.coupling = TrialRecord::Coupling{std::stoull(f[10]), std::stoull(f[11]), std::stoull(f[12])};
            rows.push_back(row);
        } catch (const std::exception& e) {
            throw IoError("trial table line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells)
{
    out << "rho,b,metric,status,reason,trials,mean_isolated,var_isolated,ci99_isolated,p_no_isolated,"
           "ci99_p_no_isolated,frac_connected,ci99_connected,mean_degree,ci99_degree,tv_to_poisson,"
           "mean_isolated_boundary,ci99_isolated_boundary,expected_isolated,expected_isolated_error,"
           "asymptotic_mean,prob_no_isolated,theory_mean_degree,boundary_excess,epsilon,b1,b2\n";
    for (const auto& c : cells) {
        std::string reason = c.skipped ? c.reason : c.theory_note;
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        out << fmt17(c.rho) << ',' << fmt17(c.b) << ',' << to_string(c.metric) << ','
            << (c.skipped ? "skipped" : "ok") << ',' << reason << ',' << c.trials;
        if (c.skipped) {
            out << std::string(21, ',') << '\n';
            continue;
        }
        const double nan = kNaN;
        const bool th = c.theory_ok;
        const bool cs = c.chen_stein_ok;
        for (double v : {c.mean_isolated, c.var_isolated, c.ci99_isolated, c.p_no_isolated,
                         c.ci99_p_no_isolated, c.frac_connected, c.ci99_connected, c.mean_degree,
                         c.ci99_degree, c.tv_to_poisson, c.mean_isolated_boundary,
                         c.ci99_isolated_boundary, th ? c.theory.expected_isolated : nan,
                         th ? c.theory.expected_isolated_error : nan, th ? c.theory.asymptotic_mean : nan,
                         th ? c.theory.prob_no_isolated : nan, th ? c.theory.mean_degree : nan,
                         th ? c.theory.boundary_excess : nan, c.epsilon, cs ? c.chen_stein.b1 : nan,
                         cs ? c.chen_stein.b2 : nan})
            out << ',' << fmt17(v);
        out << '\n';
    }
}

namespace {

json num(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

} // namespace

json to_json(const CampaignResult& result)
{
    json trials = json::array();
    for (const auto& row : result.rows) {
        const auto& r = row.record;
        json j = {{"rho", row.rho},
                  {"b", row.b},
                  {"metric", to_string(row.metric)},
                  {"trial", r.trial_index},
                  {"n_points", r.n_points},
                  {"n_edges", r.n_edges},
                  {"isolated", r.isolated},
                  {"n_components", r.n_components},
                  {"connected", r.connected},
                  {"mean_degree", r.mean_degree}};
        if (r.coupling) {
            j["isolated_torus"] = r.coupling->isolated_torus;
            j["isolated_square"] = r.coupling->isolated_square;
            j["isolated_boundary"] = r.coupling->isolated_boundary;
        }
        trials.push_back(std::move(j));
    }
    json summary = json::array();
    for (const auto& c : result.cells) {
        json j = {{"rho", c.rho}, {"b", c.b}, {"metric", to_string(c.metric)},
                  {"status", c.skipped ? "skipped" : "ok"}, {"trials", c.trials}};
        if (c.skipped) {
            j["reason"] = c.reason;
            summary.push_back(std::move(j));
            continue;
        }
        j["mean_isolated"] = num(c.mean_isolated);
        j["var_isolated"] = num(c.var_isolated);
        j["ci99_isolated"] = num(c.ci99_isolated);
        j["p_no_isolated"] = num(c.p_no_isolated);
        j["ci99_p_no_isolated"] = num(c.ci99_p_no_isolated);
        j["frac_connected"] = num(c.frac_connected);
        j["ci99_connected"] = num(c.ci99_connected);
        j["mean_degree"] = num(c.mean_degree);
        j["ci99_degree"] = num(c.ci99_degree);
        j["tv_to_poisson"] = num(c.tv_to_poisson);
        j["mean_isolated_boundary"] = num(c.mean_isolated_boundary);
        j["ci99_isolated_boundary"] = num(c.ci99_isolated_boundary);
        if (c.theory_ok)
            j["theory"] = {{"expected_isolated", c.theory.expected_isolated},
                           {"expected_isolated_error", c.theory.expected_isolated_error},
                           {"asymptotic_mean", c.theory.asymptotic_mean},
                           {"prob_no_isolated", c.theory.prob_no_isolated},
                           {"mean_degree", c.theory.mean_degree},
                           {"boundary_excess", c.theory.boundary_excess}};
        if (c.chen_stein_ok)
            j["chen_stein"] = {{"epsilon", c.epsilon}, {"b1", c.chen_stein.b1}, {"b2", c.chen_stein.b2}};
        if (!c.theory_note.empty())
            j["note"] = c.theory_note;
        summary.push_back(std::move(j));
    }
    return {{"trials", std::move(trials)}, {"summary", std::move(summary)}};
}

std::filesystem::path summary_path(const std::filesystem::path& output)
{
    auto p = output;
    const auto ext = output.extension().string();
    p.replace_filename(output.stem().string() + "_summary" + (ext.empty() ? ".csv" : ext));
    return p;
}

void persist(const CampaignResult& result, const std::filesystem::path& output, OutputFormat format)
{
    auto open = [](const std::filesystem::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out)
            throw IoError("cannot write " + p.string());
        return out;
    };
    if (format == OutputFormat::Json) {
        auto out = open(output);
        out << to_json(result).dump(2) << '\n';
        if (!out)
            throw IoError("write failed for " + output.string());
        return;
    }
    {
        auto out = open(output);
        write_trials_csv(out, result.rows);
        if (!out)
            throw IoError("write failed for " + output.string());
    }
    const auto sp = summary_path(output);
    auto out = open(sp);
    write_summary_csv(out, result.cells);
    if (!out)
        throw IoError("write failed for " + sp.string());
}

std::string format_theory(const ConnectionModel& model, double rho, double b, const TheoryReport& rep,
                          const std::optional<ChenSteinTerms>& cs, double epsilon)
{
    std::ostringstream out;
    auto line = [&out](const char* key, const std::string& v) { out << key << ' ' << v << '\n'; };
    line("model", model.name());
    line("C", fmt17(model.C()));
    line("rho", fmt17(rho));
    line("b", fmt17(b));
    line("r", fmt17(connection_radius(model.C(), rho, b)));
    line("metric", std::string(to_string(rep.metric)));
    line("expected_isolated", fmt17(rep.expected_isolated));
    line("expected_isolated_error", fmt17(rep.expected_isolated_error));
    line("asymptotic_mean", fmt17(rep.asymptotic_mean));
    line("prob_no_isolated", fmt17(rep.prob_no_isolated));
    line("mean_degree", fmt17(rep.mean_degree));
    line("boundary_excess", fmt17(rep.boundary_excess));
    line("boundary_excess_error", fmt17(rep.boundary_excess_error));
    line("epsilon", fmt17(epsilon));
    if (cs) {
        line("b1", fmt17(cs->b1));
        line("b2", fmt17(cs->b2));
        line("b2_error", fmt17(cs->b2_error));
        // finite-density evaluation of asymptotic expressions; b3 is not evaluated (taken as 0)
        line("tv_bound_b3_zero", fmt17(chen_stein_tv_bound(cs->b1, cs->b2, 0.0, rep.expected_isolated)));
    }
    return out.str();
}

} // namespace rcm
