#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nrl::cli {

struct IngestArgs {
    std::string prices;
    std::string sentiment;
    std::string yields;
    std::string sectors;
    std::string out;
    std::string bond_ticker = "BOND10Y";
    double bond_maturity_years = 10.0;
    bool force = false;
};

// Validates and preprocesses the input CSVs into a bundle directory and
// prints a per-asset entry/exit summary.
void cmd_ingest(const IngestArgs& args, std::ostream& log);

struct BacktestArgs {
    std::string config;
    std::string bundle;
    std::string out;
    bool force = false;
};

// Runs the allocator plus the four benchmark strategies on the bundle and
// writes equity curves, trade log, metrics and the resolved config echo.
void cmd_backtest(const BacktestArgs& args, std::ostream& log);

struct GridArgs {
    std::string grid;
    std::string config; // base config; grid axes override it
    std::string bundle;
    std::string out;
    int jobs = 1;
    std::string sort_by = "sharpe";
    bool force = false;
};

// Cartesian product of the grid axes; completed runs are skipped by config
// hash, failures are recorded as failed rows and the grid continues.
void cmd_grid(const GridArgs& args, std::ostream& log);

struct ReportArgs {
    std::vector<std::string> runs;
    std::string out;
};

// Merges one or more run directories into comparison CSVs for plotting.
void cmd_report(const ReportArgs& args, std::ostream& log);

} // namespace nrl::cli
