#pragma once

#include <string>
#include <vector>

#include "darboux/config.hpp"

namespace darboux {

// Command entry points; each is a pure function of its config and writes
// its outputs under cfg.outdir. Exit codes: 0 success, 2 config error,
// 3 numeric failure.
void cmd_isoclines(const ExperimentConfig& cfg);
void cmd_dulac(const ExperimentConfig& cfg);
void cmd_portrait(const ExperimentConfig& cfg);
void cmd_cycles(const ExperimentConfig& cfg);
void cmd_bound(const ExperimentConfig& cfg);
void cmd_blowup(const ExperimentConfig& cfg);

int run_cli(const std::vector<std::string>& args);

}  // namespace darboux
