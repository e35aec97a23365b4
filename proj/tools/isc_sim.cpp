#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "isc/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Driver-automation shared steering simulator"};

    std::string scenario;
    std::string config;
    std::string driver;
    isc::RunOptions options;
    bool seedless = false;

    app.add_option("--scenario", scenario, "path_following | obstacle_avoidance | combined")
        ->check(CLI::IsMember({"path_following", "obstacle_avoidance", "combined"}));
    app.add_option("--config", config, "scenario config file (key = value)")->check(CLI::ExistingFile);
    app.add_option("--out", options.out, "output directory")->capture_default_str();
    app.add_option("--sweep-lambda-a", options.sweep_lambda_a, "comma-separated automation weights")
        ->delimiter(',');
    app.add_option("--driver", driver, "adaptive | conventional")
        ->check(CLI::IsMember({"adaptive", "conventional"}));
    app.add_flag("--plot-data", options.plot_data, "also write two-column plot data files");
    app.add_flag("--seedless", seedless, "assert that the run uses no randomness (always the case)");

    CLI11_PARSE(app, argc, argv);

    if (!scenario.empty())
        options.scenario = isc::scenario_from_string(scenario);
    if (!config.empty())
        options.config = config;
    if (!driver.empty())
        options.driver = isc::driver_from_string(driver);

    return isc::run(options, std::cout, std::cerr);
}
