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

#include "qfalab/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "qfalab/classical.hpp"
#include "qfalab/convert.hpp"
#include "qfalab/errors.hpp"
#include "qfalab/machines.hpp"
#include "qfalab/quantum_rt.hpp"
#include "qfalab/twoway.hpp"
#include "qfalab/wellformed.hpp"

namespace qfa::cli {

namespace {

std::string fmt(const char *format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x);
    return buf;
}

std::string num(double x) {
    return fmt("%.17g", x);
}

void header(std::ostream &out, const std::string &command, double tol, size_t max_steps) {
    out << "# qfalab " << command << "  tol=" << fmt("%g", tol) << "  max-steps=" << max_steps
        << "  wellformed-tol=" << fmt("%g", tol::kWellformed) << "  identity-tol=" << fmt("%g", tol::kIdentity)
        << "\n";
}

std::string in_quotes(std::string_view w) {
    return "\"" + std::string(w) + "\"";
}

const Alphabet &alphabet_of(const MachineFile &file) {
    return std::visit([](const auto &m) -> const Alphabet & { return m.alphabet; }, file.machine);
}

CheckReport full_check(const MachineFile &file, const CheckOptions &options) {
    return std::visit(
        [&](const auto &m) -> CheckReport {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TwoWayKwqfa>) {
                CheckReport r = check_machine(m, file.type == MachineType::kwqfa_1way);
                if (!r.passed()) {
                    return r;
                }
                r.merge(check_local_unidirectional(transition_table(m)));
                if (!r.passed()) {
                    return r;
                }
                for (const std::string &w : m.alphabet.words_up_to(options.config_len)) {
                    try {
                        r.merge(check_config_unitary(build_config_operator(m, w)), "input " + in_quotes(w));
                    } catch (const WellformednessError &e) {
                        r.violations.push_back({"config.boundary", {}, 0, 0, e.what()});
                    }
                }
                return r;
            } else {
                return check_machine(m);
            }
        },
        file.machine);
}

void write_outcome(std::ostream &out, const RunOutcome &r) {
    out << "p_acc     " << num(r.p_acc) << "\n";
    out << "p_rej     " << num(r.p_rej) << "\n";
    out << "residual  " << num(r.residual) << "\n";
    out << "steps     " << r.steps << "\n";
    out << "converged " << (r.converged ? "yes" : "no") << "\n";
    CutpointVerdict v = classify_all(r.p_acc, 0.5);
    out << "cutpoint 1/2: strict=" << (v.strict ? "yes" : "no") << " nonstrict=" << (v.nonstrict ? "yes" : "no")
        << " equals=" << (v.equals ? "yes" : "no") << "\n";
    out << "decision  " << to_string(decide(r)) << "\n";
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot write \"" + path + "\"");
    }
    f << text;
    if (!f) {
        throw InputError("error writing \"" + path + "\"");
    }
}

template <typename T>
const T &expect(const MachineFile &file, MachineType type, const std::string &path) {
    if (file.type != type) {
        throw InputError(path + ": expected a " + to_string(type) + " machine, got " + to_string(file.type));
    }
    return std::get<T>(file.machine);
}

}  // namespace

RunOutcome evaluate(const MachineFile &file, std::string_view w, double tol, size_t max_steps) {
    return std::visit(
        [&](const auto &m) -> RunOutcome {
            using T = std::decay_t<decltype(m)>;
            RunOutcome r;
            if constexpr (std::is_same_v<T, RtPfa>) {
                r.p_acc = run_rtpfa(m, w);
                r.p_rej = 1 - r.p_acc;
                r.steps = w.size() + 2;
                r.converged = true;
            } else if constexpr (std::is_same_v<T, Gfa>) {
                r.p_acc = run_gfa(m, w);
                r.steps = w.size();
                r.converged = true;
            } else if constexpr (std::is_same_v<T, RtQfa>) {
                r.p_acc = run_rtqfa(m, w);
                r.p_rej = 1 - r.p_acc;
                r.steps = w.size() + 2;
                r.converged = true;
            } else if constexpr (std::is_same_v<T, RtKwqfa>) {
                r = run_rtkwqfa(m, w);
            } else {
                r = run_twoway(m, w, tol, max_steps);
            }
            return r;
        },
        file.machine);
}

Decision decide(const RunOutcome &r) {
    if (!r.converged) {
        return Decision::undecided;
    }
    const double slack = std::max(r.residual, 0.0) + tol::kWellformed;
    if (r.p_acc - 0.5 > slack) {
        return Decision::above;
    }
    if (0.5 - r.p_acc > slack) {
        return Decision::below;
    }
    return Decision::at;
}

const char *to_string(Decision d) {
    switch (d) {
        case Decision::above:
            return "above";
        case Decision::at:
            return "at";
        case Decision::below:
            return "below";
        case Decision::undecided:
            return "undecided";
    }
    return "?";
}

size_t threads_from_env() {
    const char *v = std::getenv("QFA_LAB_THREADS");
    if (v == nullptr) {
        return 0;
    }
    char *end = nullptr;
    long n = std::strtol(v, &end, 10);
    return (end != v && *end == '\0' && n > 0) ? static_cast<size_t>(n) : 0;
}

int cmd_check(const std::string &path, const CheckOptions &options, std::ostream &out) {
    header(out, "check " + path, RunOptions{}.tol, RunOptions{}.max_steps);
    CheckReport report;
    try {
        MachineFile file = load_machine_file(path);
        out << "type " << to_string(file.type) << "\n";
        report = full_check(file, options);
    } catch (const WellformednessError &e) {
        report.violations.push_back({"completion", {}, 0, tol::kDegenerate, e.what()});
    }
    if (options.json) {
        out << report_json(report) << "\n";
    } else {
        write_report_text(out, report);
    }
    return report.passed() ? kOk : kFailure;
}

int cmd_run(const std::string &path, const std::string &input, const RunOptions &options, std::ostream &out) {
    header(out, "run " + path + " " + in_quotes(input), options.tol, options.max_steps);
    MachineFile file = load_machine_file(path);
    alphabet_of(file).letters_of(input);
    CheckReport report = std::visit(
        [&](const auto &m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TwoWayKwqfa>) {
                return check_machine(m, file.type == MachineType::kwqfa_1way);
            } else {
                return check_machine(m);
            }
        },
        file.machine);
    if (!report.passed()) {
        write_report_text(out, report);
        return kFailure;
    }
    RunOutcome r = evaluate(file, input, options.tol, options.max_steps);
    out << "type      " << to_string(file.type) << "\n";
    if (file.type == MachineType::gfa) {
        out << "value     " << num(r.p_acc) << "\n";
        CutpointVerdict v = classify_all(r.p_acc, 0.5);
        out << "cutpoint 1/2: strict=" << (v.strict ? "yes" : "no") << " nonstrict=" << (v.nonstrict ? "yes" : "no")
            << " equals=" << (v.equals ? "yes" : "no") << "\n";
    } else {
        write_outcome(out, r);
    }
    if (options.trace) {
        const auto *m = std::get_if<TwoWayKwqfa>(&file.machine);
        if (m == nullptr) {
            out << "# --trace applies to kwqfa-1way and kwqfa-2way machines only\n";
        } else {
            write_trace(out, *m, path_trace(*m, input, options.trace_steps));
        }
    }
    return kOk;
}

int cmd_convert(const std::string &kind, const std::vector<std::string> &inputs, const std::string &output,
                std::ostream &out) {
    header(out, "convert " + kind, RunOptions{}.tol, RunOptions{}.max_steps);
    const size_t expected = kind == "union" ? 2 : 1;
    if (inputs.size() != expected) {
        throw InputError(kind + " takes " + std::to_string(expected) + " input file(s), got " +
                         std::to_string(inputs.size()));
    }
    MachineFile result;
    if (kind == "rtqfa-to-gfa") {
        MachineFile in = load_machine_file(inputs[0]);
        const RtQfa &m = expect<RtQfa>(in, MachineType::rt_qfa, inputs[0]);
        Gfa g = rtqfa_to_gfa(m);
        out << "states " << m.state_count << " -> " << g.state_count << "\n";
        result = to_machine_file(g);
    } else if (kind == "rtpfa-to-kwqfa") {
        MachineFile in = load_machine_file(inputs[0]);
        const RtPfa &p = expect<RtPfa>(in, MachineType::rt_pfa, inputs[0]);
        RtPfaEmbedding e = rtpfa_to_rtkwqfa(p);
        out << "scale l " << num(e.scale) << "\n";
        out << "states " << p.state_count << " -> " << e.machine.state_count << "\n";
        result = to_machine_file(e.machine);
    } else if (kind == "rtpfa-to-rtqfa") {
        MachineFile in = load_machine_file(inputs[0]);
        const RtPfa &p = expect<RtPfa>(in, MachineType::rt_pfa, inputs[0]);
        RtQfa q = rtpfa_to_rtqfa(p);
        size_t kraus = 0;
        for (const SuperOp &op : q.operations) {
            kraus += op.kraus.size();
        }
        out << "states " << p.state_count << " -> " << q.state_count << "\n";
        out << "kraus elements " << kraus << "\n";
        result = to_machine_file(q);
    } else if (kind == "union") {
        MachineFile a = load_machine_file(inputs[0]);
        MachineFile b = load_machine_file(inputs[1]);
        const RtKwqfa &m1 = expect<RtKwqfa>(a, MachineType::rt_kwqfa, inputs[0]);
        const RtKwqfa &m2 = expect<RtKwqfa>(b, MachineType::rt_kwqfa, inputs[1]);
        RtKwqfa u = equiprobable_union(m1, m2);
        out << "states " << m1.state_count << " + " << m2.state_count << " -> " << u.state_count << "\n";
        result = to_machine_file(u);
    } else {
        throw InputError("unknown conversion \"" + kind +
                         "\" (expected rtqfa-to-gfa, rtpfa-to-kwqfa, rtpfa-to-rtqfa or union)");
    }
    CheckReport report = full_check(result, CheckOptions{});
    write_file(output, serialize_machine_file(result));
    out << "wrote " << output << " (" << to_string(result.type) << ")\n";
    write_report_text(out, report);
    return report.passed() ? kOk : kFailure;
}

int cmd_scan(const std::string &path, const ScanOptions &options, std::ostream &out) {
    LanguageOracle lang = oracle(options.oracle);
    MachineFile file = load_machine_file(path);
    const std::vector<std::string> words = alphabet_of(file).words_up_to(options.max_len);

    size_t threads = options.threads != 0 ? options.threads : threads_from_env();
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, std::max<size_t>(words.size(), 1));

    std::vector<RunOutcome> results(words.size());
    std::vector<std::string> failures(words.size());
    auto worker = [&](size_t first) {
        for (size_t k = first; k < words.size(); k += threads) {
            try {
                results[k] = evaluate(file, words[k], options.tol, options.max_steps);
            } catch (const Error &e) {
                failures[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t t = 1; t < threads; ++t) {
        pool.emplace_back(worker, t);
    }
    worker(0);
    for (auto &t : pool) {
        t.join();
    }

    header(out, "scan " + path + " --oracle " + lang.name + " --max-len " + std::to_string(options.max_len),
           options.tol, options.max_steps);
    out << "# word p_acc residual decision oracle agree\n";
    size_t disagreements = 0;
    size_t undecided = 0;
    size_t members = 0;
    double min_margin = 1;
    double max_nonmember_deviation = 0;
    for (size_t k = 0; k < words.size(); ++k) {
        const bool member = lang(words[k]);
        if (!failures[k].empty()) {
            ++undecided;
            out << in_quotes(words[k]) << " error " << failures[k] << "\n";
            continue;
        }
        const RunOutcome &r = results[k];
        const Decision d = decide(r);
        const bool agree = member ? d == Decision::above : d == Decision::at || d == Decision::below;
        if (d == Decision::undecided) {
            ++undecided;
        } else if (!agree) {
            ++disagreements;
        }
        if (member) {
            ++members;
            min_margin = std::min(min_margin, r.p_acc - 0.5);
        } else {
            max_nonmember_deviation = std::max(max_nonmember_deviation, std::abs(r.p_acc - 0.5));
        }
        out << in_quotes(words[k]) << " " << num(r.p_acc) << " " << fmt("%.3e", r.residual) << " " << to_string(d)
            << " " << (member ? "member" : "nonmember") << " " << (agree ? "yes" : "NO") << "\n";
    }
    out << "# strings " << words.size() << "  members " << members << "  disagreements " << disagreements
        << "  undecided " << undecided << "\n";
    if (members > 0) {
        out << "# smallest member margin " << num(min_margin) << "\n";
    }
    out << "# largest non-member deviation from 1/2 " << num(max_nonmember_deviation) << "\n";
    return disagreements == 0 && undecided == 0 ? kOk : kFailure;
}

int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"qfalab: simulate and verify probabilistic and quantum finite automata"};
    app.require_subcommand(1);

    std::string path;
    std::string input;
    CheckOptions check_options;
    auto *check = app.add_subcommand("check", "Check a machine file for wellformedness");
    check->add_option("machine", path, "Machine file")->required();
    check->add_option("--config-len", check_options.config_len,
                      "Two-way machines: check configuration unitarity on inputs up to this length");
    check->add_flag("--json", check_options.json, "Print the report as JSON");

    RunOptions run_options;
    auto *run = app.add_subcommand("run", "Run a machine on one input");
    run->add_option("machine", path, "Machine file")->required();
    run->add_option("input", input, "Input word (omit for the empty word)");
    run->add_option("--tol", run_options.tol, "Stop once the nonhalting mass is below this");
    run->add_option("--max-steps", run_options.max_steps, "Step budget for two-way machines");
    run->add_flag("--trace", run_options.trace, "Print the nonhalting superposition after each step");
    run->add_option("--trace-steps", run_options.trace_steps, "Number of steps to trace");

    std::string kind;
    std::vector<std::string> inputs;
    std::string output;
    auto *convert = app.add_subcommand("convert", "Convert between machine models");
    convert->add_option("kind", kind, "rtqfa-to-gfa | rtpfa-to-kwqfa | rtpfa-to-rtqfa | union")->required();
    convert->add_option("inputs", inputs, "Input machine file(s)")->required();
    convert->add_option("-o,--output", output, "Output machine file")->required();

    ScanOptions scan_options;
    auto *scan = app.add_subcommand("scan", "Compare a machine with a language oracle on all short words");
    scan->add_option("machine", path, "Machine file")->required();
    scan->add_option("--oracle", scan_options.oracle, "lnh | lys | lfre")->required();
    scan->add_option("--max-len", scan_options.max_len, "Longest word to try");
    scan->add_option("--tol", scan_options.tol, "Stop once the nonhalting mass is below this");
    scan->add_option("--max-steps", scan_options.max_steps, "Step budget for two-way machines");
    scan->add_option("--threads", scan_options.threads, "Worker threads (default: QFA_LAB_THREADS or all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (*check) {
            return cmd_check(path, check_options, out);
        }
        if (*run) {
            return cmd_run(path, input, run_options, out);
        }
        if (*convert) {
            return cmd_convert(kind, inputs, output, out);
        }
        return cmd_scan(path, scan_options, out);
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const InputError &e) {
        err << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace qfa::cli
