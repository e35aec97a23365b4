#include "isc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace isc {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("config line {}: {}", line, message) : "config: " + message),
      line_(line)
{
}

std::string_view to_string(DriverKind kind)
{
    return kind == DriverKind::adaptive ? "adaptive" : "conventional";
}

DriverKind driver_from_string(std::string_view name)
{
    if (name == "adaptive")
        return DriverKind::adaptive;
    if (name == "conventional")
        return DriverKind::conventional;
    throw std::invalid_argument(fmt::format("unknown driver kind '{}'", name));
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

double parse_double(std::string_view token, int line)
{
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(line, fmt::format("expected a finite number, got '{}'", token));
    return v;
}

std::vector<double> parse_numbers(std::string_view value, int line)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < value.size()) {
        const auto start = value.find_first_not_of(" \t,", pos);
        if (start == std::string_view::npos)
            break;
        auto stop = value.find_first_of(" \t,", start);
        if (stop == std::string_view::npos)
            stop = value.size();
        out.push_back(parse_double(value.substr(start, stop - start), line));
        pos = stop;
    }
    return out;
}

int parse_int(std::string_view token, int line)
{
    int v = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(line, fmt::format("expected an integer, got '{}'", token));
    return v;
}

bool parse_bool(std::string_view token, int line)
{
    if (token == "true" || token == "1" || token == "yes" || token == "on")
        return true;
    if (token == "false" || token == "0" || token == "no" || token == "off")
        return false;
    throw ConfigError(line, fmt::format("expected true or false, got '{}'", token));
}

Eigen::Matrix2d parse_matrix(std::string_view value, int line)
{
    const auto v = parse_numbers(value, line);
    if (v.size() == 2)
        return Eigen::Vector2d(v[0], v[1]).asDiagonal();
    if (v.size() == 4) {
        Eigen::Matrix2d m;
        m << v[0], v[1], v[2], v[3];
        return m;
    }
    throw ConfigError(line, fmt::format("expected 2 (diagonal) or 4 (row-major) values, got {}", v.size()));
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, int)>;

Setter number(double ScenarioConfig::*field)
{
    return [field](ScenarioConfig& c, std::string_view v, int line) { c.*field = parse_double(v, line); };
}

template <class Sub>
Setter number(Sub ScenarioConfig::*sub, double Sub::*field)
{
    return [sub, field](ScenarioConfig& c, std::string_view v, int line) { (c.*sub).*field = parse_double(v, line); };
}

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"duration", number(&ScenarioConfig::duration)},
        {"sample_time", number(&ScenarioConfig::t_s)},
        {"horizon", [](ScenarioConfig& c, std::string_view v, int l) { c.horizon = parse_int(v, l); }},
        {"vehicle.cf", number(&ScenarioConfig::vehicle, &VehicleParams::cf)},
        {"vehicle.cr", number(&ScenarioConfig::vehicle, &VehicleParams::cr)},
        {"vehicle.a", number(&ScenarioConfig::vehicle, &VehicleParams::a)},
        {"vehicle.b", number(&ScenarioConfig::vehicle, &VehicleParams::b)},
        {"vehicle.m", number(&ScenarioConfig::vehicle, &VehicleParams::m)},
        {"vehicle.iz", number(&ScenarioConfig::vehicle, &VehicleParams::iz)},
        {"vehicle.is", number(&ScenarioConfig::vehicle, &VehicleParams::is)},
        {"vehicle.u", number(&ScenarioConfig::vehicle, &VehicleParams::u_long)},
        {"q_a", [](ScenarioConfig& c, std::string_view v, int l) { c.q_a = parse_matrix(v, l); }},
        {"r_a", number(&ScenarioConfig::r_a)},
        {"q_d", [](ScenarioConfig& c, std::string_view v, int l) { c.q_d = parse_matrix(v, l); }},
        {"r_d", number(&ScenarioConfig::r_d)},
        {"driver",
         [](ScenarioConfig& c, std::string_view v, int l) {
             try {
                 c.driver = driver_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(l, e.what());
             }
         }},
        {"switching", [](ScenarioConfig& c, std::string_view v, int l) { c.switching = parse_bool(v, l); }},
        {"switching.window",
         [](ScenarioConfig& c, std::string_view v, int l) { c.switching_cfg.window = parse_int(v, l); }},
        {"switching.delta_star", number(&ScenarioConfig::switching_cfg, &SwitchingConfig::delta_star)},
        {"switching.lambda_d_high", number(&ScenarioConfig::switching_cfg, &SwitchingConfig::lambda_d_high)},
        {"switching.lambda_d_low", number(&ScenarioConfig::switching_cfg, &SwitchingConfig::lambda_d_low)},
        {"switching.q_d_hat",
         [](ScenarioConfig& c, std::string_view v, int l) { c.switching_cfg.q_d_hat = parse_matrix(v, l); }},
        {"switching.r_d_hat", number(&ScenarioConfig::switching_cfg, &SwitchingConfig::r_d_hat)},
        {"switching.clear_on_switch",
         [](ScenarioConfig& c, std::string_view v, int l) { c.switching_cfg.clear_on_switch = parse_bool(v, l); }},
        {"path.amplitude", number(&ScenarioConfig::path, &PathShape::amplitude)},
        {"path.period", number(&ScenarioConfig::path, &PathShape::period)},
        {"path.offset", number(&ScenarioConfig::path, &PathShape::offset)},
        {"path.change_duration", number(&ScenarioConfig::path, &PathShape::change_duration)},
        {"path.change_start", number(&ScenarioConfig::path, &PathShape::change_start)},
    };
    return table;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::optional<ScenarioKind> kind_override)
{
    std::map<std::string, Entry, std::less<>> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, fmt::format("expected 'key = value', got '{}'", line));
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(line_no, "missing key");
        if (value.empty())
            throw ConfigError(line_no, fmt::format("missing value for '{}'", key));
        if (key != "scenario" && key != "lambda_d" && key != "lambda_a" && !setters().contains(key))
            throw ConfigError(line_no, fmt::format("unknown key '{}'", key));
        if (const auto it = entries.find(key); it != entries.end())
            throw ConfigError(line_no, fmt::format("duplicate key '{}' (first set on line {})", key, it->second.line));
        entries.emplace(key, Entry{std::string(value), line_no});
    }

    ScenarioKind kind = kind_override.value_or(ScenarioKind::path_following);
    if (const auto it = entries.find("scenario"); it != entries.end()) {
        ScenarioKind from_file{};
        try {
            from_file = scenario_from_string(it->second.value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(it->second.line, e.what());
        }
        if (kind_override && *kind_override != from_file)
            throw ConfigError(it->second.line, fmt::format("scenario '{}' conflicts with requested scenario '{}'",
                                                           it->second.value, to_string(*kind_override)));
        kind = from_file;
    }

    ScenarioConfig cfg = ScenarioConfig::defaults(kind);
    for (const auto& [key, entry] : entries) {
        if (const auto it = setters().find(key); it != setters().end())
            it->second(cfg, entry.value, entry.line);
    }
    if (entries.contains("r_d") && !entries.contains("switching.r_d_hat"))
        cfg.switching_cfg.r_d_hat = cfg.r_d;

    const auto ld = entries.find("lambda_d");
    const auto la = entries.find("lambda_a");
    if (ld != entries.end() && la != entries.end()) {
        cfg.initial_weights = {parse_double(ld->second.value, ld->second.line),
                               parse_double(la->second.value, la->second.line)};
    } else if (ld != entries.end()) {
        cfg.initial_weights = AuthorityWeights::from_driver(parse_double(ld->second.value, ld->second.line));
    } else if (la != entries.end()) {
        const double a = parse_double(la->second.value, la->second.line);
        cfg.initial_weights = {1.0 - a, a};
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, std::optional<ScenarioKind> kind_override)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(0, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), kind_override);
}

namespace {

std::string format_matrix(const Eigen::Matrix2d& m)
{
    if (m(0, 1) == 0.0 && m(1, 0) == 0.0)
        return fmt::format("{}, {}", m(0, 0), m(1, 1));
    return fmt::format("{}, {}, {}, {}", m(0, 0), m(0, 1), m(1, 0), m(1, 1));
}

}  // namespace

void write_config(std::ostream& os, const ScenarioConfig& c)
{
    const auto& v = c.vehicle;
    const auto& s = c.switching_cfg;
    const auto& p = c.path;
    fmt::print(os, "# scenario\n");
    fmt::print(os, "scenario = {}\nduration = {}\nsample_time = {}\nhorizon = {}\n", to_string(c.kind),
               c.duration, c.t_s, c.horizon);
    fmt::print(os, "\n# vehicle\n");
    fmt::print(os,
               "vehicle.cf = {}\nvehicle.cr = {}\nvehicle.a = {}\nvehicle.b = {}\n"
               "vehicle.m = {}\nvehicle.iz = {}\nvehicle.is = {}\nvehicle.u = {}\n",
               v.cf, v.cr, v.a, v.b, v.m, v.iz, v.is, v.u_long);
    fmt::print(os, "\n# controller weights\n");
    fmt::print(os, "q_a = {}\nr_a = {}\nq_d = {}\nr_d = {}\n", format_matrix(c.q_a), c.r_a,
               format_matrix(c.q_d), c.r_d);
    fmt::print(os, "lambda_d = {}\nlambda_a = {}\ndriver = {}\n", c.initial_weights.lambda_d,
               c.initial_weights.lambda_a, to_string(c.driver));
    fmt::print(os, "\n# authority switching\n");
    fmt::print(os,
               "switching = {}\nswitching.window = {}\nswitching.delta_star = {}\n"
               "switching.lambda_d_high = {}\nswitching.lambda_d_low = {}\n"
               "switching.q_d_hat = {}\nswitching.r_d_hat = {}\nswitching.clear_on_switch = {}\n",
               c.switching, s.window, s.delta_star, s.lambda_d_high, s.lambda_d_low, format_matrix(s.q_d_hat),
               s.r_d_hat, s.clear_on_switch);
    fmt::print(os, "\n# reference path\n");
    fmt::print(os,
               "path.amplitude = {}\npath.period = {}\npath.offset = {}\n"
               "path.change_duration = {}\npath.change_start = {}\n",
               p.amplitude, p.period, p.offset, p.change_duration, p.change_start);
}

std::string write_config(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    write_config(os, cfg);
    return os.str();
}

}  // namespace isc
