// Copyright 2026 The qfalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: check, run, convert and scan machine files.
//
// Exit status: 0 success, 1 semantic failure (a failed check, a scan
// disagreement or undecided run), 2 usage or parse error.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qfalab/linalg.hpp"
#include "qfalab/machine_file.hpp"

namespace qfa::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct RunOptions {
    double tol = 1e-12;
    size_t max_steps = 100000;
    bool trace = false;
    size_t trace_steps = 100;
};

struct ScanOptions {
    std::string oracle;
    size_t max_len = 8;
    double tol = 1e-12;
    size_t max_steps = 100000;
    /// 0 means: QFA_LAB_THREADS if set, otherwise the hardware concurrency.
    size_t threads = 0;
};

struct CheckOptions {
    /// Two-way machines: configuration-level unitarity is checked on every
    /// input up to this length.
    size_t config_len = 6;
    bool json = false;
};

/// Acceptance probability of any machine type on one input. GFAs report their
/// raw value as p_acc. Nonhalting mass of real-time machines is residual.
RunOutcome evaluate(const MachineFile &file, std::string_view w, double tol = 1e-12, size_t max_steps = 100000);

/// How a run reads against cutpoint 1/2 once the residual is accounted for.
enum class Decision { above, at, below, undecided };
Decision decide(const RunOutcome &r);
const char *to_string(Decision d);

int cmd_check(const std::string &path, const CheckOptions &options, std::ostream &out);
int cmd_run(const std::string &path, const std::string &input, const RunOptions &options, std::ostream &out);
/// kind: rtqfa-to-gfa, rtpfa-to-kwqfa, rtpfa-to-rtqfa or union (two inputs).
int cmd_convert(const std::string &kind, const std::vector<std::string> &inputs, const std::string &output,
                std::ostream &out);
int cmd_scan(const std::string &path, const ScanOptions &options, std::ostream &out);

/// QFA_LAB_THREADS when it parses as a positive integer, else 0.
size_t threads_from_env();

/// Parses argv and dispatches. Errors go to `err`.
int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qfa::cli
