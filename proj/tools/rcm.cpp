#include "rcm/campaign.hpp"
#include "rcm/errors.hpp"
#include "rcm/models.hpp"
#include "rcm/theory.hpp"

#include "CLI11.hpp"

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 2, kModel = 3, kIo = 4 };

struct CampaignArgs {
    std::string config;
    unsigned workers = 1;
    std::string output;
    std::string format;
    std::string dump_dir;
};

rcm::CampaignConfig resolve_config(const CampaignArgs& args)
{
    auto cfg = rcm::load_config(args.config);
    if (const char* env = std::getenv("RCM_SEED"); env && *env) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 0);
        if (errno || *end || env[0] == '-')
            throw rcm::ConfigError("RCM_SEED", "expected an unsigned 64-bit integer");
        cfg.master_seed = v;
    }
    if (!args.output.empty())
        cfg.output_path = args.output;
    if (!args.format.empty())
        cfg.format = args.format == "json" ? rcm::OutputFormat::Json : rcm::OutputFormat::Csv;
    if (cfg.output_path.empty())
        throw rcm::ConfigError("output", "no output path (set it in the config or pass --output)");
    return cfg;
}

rcm::ConnectionModel checked_model(const rcm::ModelSpec& spec, const fs::path& base)
{
    auto model = rcm::build_model(spec, base);
    const auto& v = model.validation();
    if (!v.usable()) {
        std::string why;
        if (!v.monotone_ok)
            why += " not non-increasing;";
        if (!v.range_ok)
            why += " values outside [0, 1];";
        if (!v.integral_finite)
            why += " plane integral not finite;";
        if (!v.tail_ok)
            why += " tail decays too slowly;";
        throw rcm::ModelError("model '" + model.name() + "' failed validation:" + why);
    }
    return model;
}

int run_campaign_cmd(const CampaignArgs& args, bool coupled)
{
    auto cfg = resolve_config(args);
    if (coupled)
        cfg.metric = rcm::CampaignMetric::Coupled;
    const auto model = checked_model(cfg.model, fs::path(args.config).parent_path());

    rcm::RunOptions opt;
    opt.workers = args.workers;
    if (!args.dump_dir.empty()) {
        std::error_code ec;
        fs::create_directories(args.dump_dir, ec);
        if (ec)
            throw rcm::IoError("cannot create " + args.dump_dir + ": " + ec.message());
        opt.dump_dir = args.dump_dir;
    }
    const auto result = rcm::run_campaign(cfg, model, opt);
    for (const auto& w : result.warnings)
        std::cerr << "warning: " << w << '\n';
    rcm::persist(result, cfg.output_path, cfg.format);
    std::cerr << result.rows.size() << " trial rows, " << result.cells.size() << " cells -> "
              << cfg.output_path << '\n';
    return kOk;
}

int validate_model_cmd(const std::string& config)
{
    const auto cfg = rcm::load_config(config);
    const auto model = rcm::build_model(cfg.model, fs::path(config).parent_path());
    const auto& v = model.validation();
    std::cout << "model " << model.name() << '\n'
              << "cutoff " << model.cutoff() << '\n'
              << "monotone " << (v.monotone_ok ? "ok" : "FAIL") << '\n'
              << "range " << (v.range_ok ? "ok" : "FAIL") << '\n'
              << "integrable " << (v.integral_finite ? "ok" : "FAIL") << '\n'
              << "tail " << (v.tail_ok ? "ok" : "FAIL") << '\n';
    if (v.tail_witness)
        std::cout << "tail_witness " << *v.tail_witness << '\n';
    if (v.integral_finite)
        std::cout << "C " << model.C() << '\n';
    return v.usable() ? kOk : kModel;
}

struct TheoryArgs {
    std::string model = "unit_disk";
    double sigma_db = 0.0;
    double eta = 0.0;
    std::string table;
    double rho = 0.0;
    double b = 0.0;
    double epsilon = 0.25;
    std::string metric = "torus";
    std::string output;
};

int theory_cmd(const TheoryArgs& a)
{
    rcm::ModelSpec spec;
    spec.kind = a.model;
    spec.sigma_db = a.sigma_db;
    spec.eta = a.eta;
    spec.table_file = a.table;
    if (spec.kind == "table" && spec.table_file.empty())
        throw rcm::ConfigError("table", "a table model needs --table PATH");
    const auto model = checked_model(spec, {});
    const auto metric = rcm::metric_from_string(a.metric);

    const auto report = rcm::theory_report(model, a.rho, a.b, metric);
    std::optional<rcm::ChenSteinTerms> cs;
    std::string note;
    try {
        rcm::ChenSteinParams csp;
        csp.epsilon = a.epsilon;
        cs = rcm::chen_stein_terms(model, a.rho, a.b, csp);
    } catch (const rcm::ParameterError& e) {
        note = e.what();
    }
    const auto text = rcm::format_theory(model, a.rho, a.b, report, cs, a.epsilon);
    std::cout << text;
    if (!note.empty())
        std::cerr << "warning: chen-stein terms not evaluated: " << note << '\n';
    if (!a.output.empty()) {
        std::ofstream out(a.output, std::ios::binary);
        if (!(out << text))
            throw rcm::IoError("cannot write " + a.output);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random connection model simulator and theory calculator"};
    app.require_subcommand(1);

    CampaignArgs sim_args, couple_args;
    auto add_campaign = [&app](const char* name, const char* help, CampaignArgs& a) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", a.config, "JSON campaign config")->required();
        sub->add_option("--workers", a.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--output", a.output, "output path (overrides the config)");
        sub->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--dump-dir", a.dump_dir, "write every trial graph as an edge list here");
        return sub;
    };
    auto* simulate = add_campaign("simulate", "run a (rho, b) sweep", sim_args);
    auto* couple = add_campaign("couple", "run a sweep of coupled torus/square trials", couple_args);

    std::string validate_config;
    auto* validate = app.add_subcommand("validate-model", "check a model against the conditions on g");
    validate->add_option("config", validate_config, "JSON campaign config")->required();

    TheoryArgs th;
    auto* theory = app.add_subcommand("theory", "print finite-density predictions without simulating");
    theory->add_option("--model", th.model, "unit_disk, gaussian, log_normal or table")
        ->check(CLI::IsMember({"unit_disk", "gaussian", "log_normal", "table"}));
    theory->add_option("--sigma-db", th.sigma_db, "log-normal shadowing sigma in dB");
    theory->add_option("--eta", th.eta, "log-normal path-loss exponent");
    theory->add_option("--table", th.table, "two-column table file");
    theory->add_option("--rho", th.rho, "density")->required();
    theory->add_option("--b", th.b, "offset b")->required();
    theory->add_option("--epsilon", th.epsilon, "Chen-Stein neighbourhood exponent");
    theory->add_option("--metric", th.metric, "torus or square")->check(CLI::IsMember({"torus", "square"}));
    theory->add_option("--output", th.output, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*simulate)
            return run_campaign_cmd(sim_args, false);
        if (*couple)
            return run_campaign_cmd(couple_args, true);
        if (*validate)
            return validate_model_cmd(validate_config);
        if (*theory)
            return theory_cmd(th);
    } catch (const rcm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const rcm::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const rcm::ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kModel;
    } catch (const rcm::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
