#include "isc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <utility>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "isc/manifest.hpp"

namespace isc {

namespace fs = std::filesystem;

std::vector<PlannedRun> plan_runs(const ScenarioConfig& base, const std::vector<double>& sweep_lambda_a)
{
    const std::string name(to_string(base.kind));
    if (sweep_lambda_a.empty())
        return {{name, base}};

    std::vector<PlannedRun> runs;
    for (const double la : sweep_lambda_a) {
        if (!std::isfinite(la) || la < 0.0 || la > 1.0)
            throw std::invalid_argument(fmt::format("sweep value lambda_A = {} outside [0, 1]", la));
        ScenarioConfig cfg = base;
        cfg.initial_weights = {1.0 - la, la};
        cfg.validate();
        std::string tag = fmt::format("{}_lambda_a_{:g}", name, la);
        for (const auto& r : runs)
            if (r.tag == tag)
                throw std::invalid_argument(fmt::format("sweep value lambda_A = {:g} listed twice", la));
        runs.push_back({std::move(tag), std::move(cfg)});
    }
    return runs;
}

std::string format_summary(const std::vector<PlannedRun>& runs, const std::vector<Metrics>& metrics)
{
    if (runs.size() != metrics.size())
        throw std::invalid_argument("format_summary: runs and metrics differ in length");
    std::string out = fmt::format("{:<20} {:>10} {:>10} {:>14} {:>14} {:>14} {:>14} {:>10} {:>8}\n", "scenario",
                                  "lambda_D", "lambda_A", "rms_y_err", "rms_psi_err", "rms_uD", "peak_uD",
                                  "latency_s", "switches");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& c = runs[i].cfg;
        const auto& m = metrics[i];
        const std::string latency = m.latency ? fmt::format("{:.4f}", *m.latency) : "-";
        out += fmt::format("{:<20} {:>10.4g} {:>10.4g} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>10} {:>8}\n",
                           to_string(c.kind), c.initial_weights.lambda_d, c.initial_weights.lambda_a, m.rms_y_err,
                           m.rms_psi_err, m.rms_u_d, m.peak_u_d, latency, m.switches);
    }
    return out;
}

namespace {

template <class Column>
std::string two_column(const SimTrace& trace, std::string_view header, Column column)
{
    std::string out = fmt::format("# t {}\n", header);
    for (const auto& row : trace.rows)
        out += fmt::format("{:.17g} {:.17g}\n", row.t, column(row));
    return out;
}

std::string switch_window(const SimTrace& trace, std::size_t k_switch)
{
    const auto span = static_cast<std::size_t>(std::llround(1.0 / trace.t_s));
    const std::size_t first = k_switch > span ? k_switch - span : 0;
    const std::size_t last = std::min(trace.rows.size() - 1, k_switch + span);
    std::string out = "# t_minus_t_switch u_D\n";
    for (std::size_t k = first; k <= last; ++k)
        out += fmt::format("{:.17g} {:.17g}\n",
                           (static_cast<double>(k) - static_cast<double>(k_switch)) * trace.t_s,
                           trace.rows[k].u_d);
    return out;
}

std::string reference_curve(const ReferencePath& ref, std::size_t steps, double t_s)
{
    std::string out = "# t y_ref\n";
    for (std::size_t k = 0; k < steps; ++k)
        out += fmt::format("{:.17g} {:.17g}\n", static_cast<double>(k) * t_s, ref.at(k).y);
    return out;
}

/// Files written so far; removed again unless commit() is called.
class OutputTransaction {
public:
    explicit OutputTransaction(fs::path dir)
        : dir_(std::move(dir))
    {
        if (!fs::exists(dir_)) {
            fs::create_directories(dir_);
            created_dir_ = true;
        } else if (!fs::is_directory(dir_)) {
            throw std::runtime_error(fmt::format("output path '{}' is not a directory", dir_.string()));
        }
    }
    OutputTransaction(const OutputTransaction&) = delete;
    OutputTransaction& operator=(const OutputTransaction&) = delete;

    ~OutputTransaction()
    {
        if (committed_)
            return;
        std::error_code ec;
        for (const auto& p : written_)
            fs::remove(p, ec);
        if (created_dir_)
            fs::remove(dir_, ec);  // only succeeds when empty
    }

    void write(const std::string& name, std::string_view contents)
    {
        const fs::path target = dir_ / name;
        written_.push_back(target);
        std::ofstream os(target, std::ios::binary | std::ios::trunc);
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        os.close();
        if (!os)
            throw std::runtime_error(fmt::format("cannot write '{}'", target.string()));
    }

    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool created_dir_ = false;
    bool committed_ = false;
};

}  // namespace

int run(const RunOptions& options, std::ostream& log, std::ostream& err)
{
    try {
        ScenarioConfig base = options.config ? load_config(*options.config, options.scenario)
                                             : ScenarioConfig::defaults(
                                                   options.scenario.value_or(ScenarioKind::path_following));
        if (options.driver)
            base.driver = *options.driver;
        base.validate();

        const std::vector<PlannedRun> runs = plan_runs(base, options.sweep_lambda_a);

        std::vector<std::future<ScenarioResult>> pending;
        pending.reserve(runs.size());
        for (const auto& planned : runs)
            pending.push_back(std::async(std::launch::async, [&planned] { return run_scenario(planned.cfg); }));
        std::vector<ScenarioResult> results;
        results.reserve(runs.size());
        for (auto& f : pending)
            results.push_back(f.get());

        std::vector<Metrics> metrics;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const auto dyn = discretize(build_continuous(runs[i].cfg.vehicle), runs[i].cfg.t_s);
            if (const auto problem = check_trace(results[i].trace, dyn)) {
                err << fmt::format("isc_sim: run '{}' failed the trace check: {}\n", runs[i].tag, *problem);
                return 2;
            }
            metrics.push_back(results[i].metrics);
        }

        // Assemble every output in memory, then write sequentially.
        std::vector<std::pair<std::string, std::string>> files;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            std::ostringstream csv;
            write_trace_csv(csv, results[i].trace);
            files.emplace_back(fmt::format("trace_{}.csv", runs[i].tag), csv.str());
        }
        files.emplace_back("summary.txt", format_summary(runs, metrics));
        if (options.plot_data) {
            for (std::size_t i = 0; i < runs.size(); ++i) {
                const auto& trace = results[i].trace;
                const auto& tag = runs[i].tag;
                files.emplace_back(fmt::format("plot_y_{}.dat", tag),
                                   two_column(trace, "y", [](const TraceRow& r) { return r.x.y; }));
                files.emplace_back(fmt::format("plot_uD_{}.dat", tag),
                                   two_column(trace, "u_D", [](const TraceRow& r) { return r.u_d; }));
                if (const auto sw = first_switch(trace))
                    files.emplace_back(fmt::format("plot_uD_switch_{}.dat", tag), switch_window(trace, *sw));
            }
            const std::size_t steps = runs.front().cfg.steps();
            const double t_s = runs.front().cfg.t_s;
            files.emplace_back("plot_ref_automation.dat", reference_curve(results.front().automation_ref, steps, t_s));
            files.emplace_back("plot_ref_driver.dat", reference_curve(results.front().driver_ref, steps, t_s));
        }

        RunManifest manifest;
        manifest.config_path = options.config ? options.config->string() : std::string();
        manifest.output_dir = options.out.string();
        manifest.scenario = std::string(to_string(base.kind));
        if (!options.sweep_lambda_a.empty()) {
            manifest.sweep_parameter = "lambda_a";
            manifest.sweep_values = options.sweep_lambda_a;
        }
        for (const auto& [name, contents] : files)
            manifest.add(name, contents);
        std::ostringstream manifest_text;
        write_manifest(manifest_text, manifest);
        files.emplace_back("manifest.txt", manifest_text.str());

        if (options.config) {
            std::error_code ec;
            for (const auto& [name, contents] : files)
                if (fs::equivalent(options.out / name, *options.config, ec))
                    throw std::runtime_error(fmt::format("refusing to overwrite the input config '{}'",
                                                         options.config->string()));
        }

        OutputTransaction tx(options.out);
        for (const auto& [name, contents] : files)
            tx.write(name, contents);
        tx.commit();

        log << format_summary(runs, metrics);
        log << fmt::format("wrote {} files to {}\n", files.size(), options.out.string());
        return 0;
    } catch (const std::exception& e) {
        err << "isc_sim: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace isc
