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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qfalab/convert.hpp"
#include "qfalab/machine_file.hpp"
#include "qfalab/machines.hpp"
#include "test_util.hpp"

using namespace qfa;
using namespace qfa::testing;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = QFALAB_FIXTURE_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qfalab");
    std::vector<const char *> argv;
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qfalab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }
    std::string write(const std::string &name, const std::string &text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string &name) const {
        return (dir_ / name).string();
    }

    fs::path dir_;
};

// Value printed after `key` on its own line, e.g. "p_acc     0.5".
double field(const std::string &out, const std::string &key) {
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + " ", 0) == 0) {
            return std::stod(line.substr(key.size()));
        }
    }
    ADD_FAILURE() << "no " << key << " in\n" << out;
    return 0;
}

bool contains(const std::string &text, const std::string &needle) {
    return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_F(CliTest, check_fixtures) {
    Result nh = invoke({"check", kFixtures + "/lnh.json"});
    EXPECT_EQ(nh.code, 0) << nh.out;
    EXPECT_TRUE(contains(nh.out, "PASS"));
    EXPECT_TRUE(contains(nh.out, "tol=1e-12"));
    EXPECT_TRUE(contains(nh.out, "max-steps=100000"));
    EXPECT_EQ(invoke({"check", kFixtures + "/identity_pfa.json"}).code, 0);
    EXPECT_EQ(invoke({"check", kFixtures + "/lys.json", "--json"}).code, 0);
}

TEST_F(CliTest, check_reports_column_sum_witness) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(std::ifstream(kFixtures + "/fair_coin.json"));
    doc["transitions"]["a"]["matrix"][1][1] = "0.6";
    Result r = invoke({"check", write("bad.json", doc.dump())});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, "stochastic.column_sum")) << r.out;
    EXPECT_TRUE(contains(r.out, "1.1")) << r.out;
}

TEST_F(CliTest, check_malformed_file_is_usage_error) {
    Result r = invoke({"check", write("broken.json", "{\"type\": ")});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "byte")) << r.err;
    EXPECT_EQ(invoke({"check", path("missing.json")}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
}

TEST_F(CliTest, run_lnh) {
    Result ab = invoke({"run", kFixtures + "/lnh.json", "ab"});
    ASSERT_EQ(ab.code, 0) << ab.err;
    EXPECT_NEAR(field(ab.out, "p_acc"), 0.5, 1e-9);
    EXPECT_TRUE(contains(ab.out, "decision  at"));
    Result abab = invoke({"run", kFixtures + "/lnh.json", "abab"});
    EXPECT_GT(field(abab.out, "p_acc"), 0.5);
    EXPECT_TRUE(contains(abab.out, "strict=yes"));
    EXPECT_TRUE(contains(abab.out, "decision  above"));
    EXPECT_EQ(invoke({"run", kFixtures + "/lnh.json", "abab"}).out, abab.out);
}

TEST_F(CliTest, run_rejects_foreign_symbols) {
    Result r = invoke({"run", kFixtures + "/lnh.json", "abc"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.err, "c")) << r.err;
}

TEST_F(CliTest, run_gfa_prints_value) {
    Result r = invoke({"run", kFixtures + "/counter_gfa.json", ""});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(field(r.out, "value"), 1);
    EXPECT_EQ(field(invoke({"run", kFixtures + "/counter_gfa.json", "abaa"}).out, "value"), 2);
}

TEST_F(CliTest, run_with_trace) {
    Result r = invoke({"run", kFixtures + "/lys.json", "abaa", "--trace"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "# step state position re im\n0 q0 1 1 0\n")) << r.out;
    const size_t at = r.out.find("\n9 p1 2 ");
    ASSERT_NE(at, std::string::npos) << r.out;
    std::istringstream row(r.out.substr(at + 8));
    double re = 0;
    double im = 0;
    row >> re >> im;
    EXPECT_NEAR(re, 0.25, 1e-9);
    EXPECT_EQ(im, 0);
}

TEST_F(CliTest, convert_rtqfa_to_gfa) {
    Rng rng(101);
    RtQfa m = random_rtqfa(4, 2, rng);
    const std::string in = write("q.json", serialize_machine_file(to_machine_file(m)));
    Result r = invoke({"convert", "rtqfa-to-gfa", in, "-o", path("g.json")});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_TRUE(contains(r.out, "states 4 -> 16")) << r.out;
    MachineFile g = load_machine_file(path("g.json"));
    EXPECT_EQ(std::get<Gfa>(g.machine).state_count, 16u);
    EXPECT_EQ(invoke({"check", path("g.json")}).code, 0);
    for (const char *w : {"", "ab", "bbaa"}) {
        EXPECT_NEAR(run_gfa(std::get<Gfa>(g.machine), w), run_rtqfa(m, w), 1e-9);
    }
}

TEST_F(CliTest, convert_rtpfa_to_kwqfa_and_union) {
    Result r = invoke({"convert", "rtpfa-to-kwqfa", kFixtures + "/fair_coin.json", "-o", path("kw.json")});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_TRUE(contains(r.out, "scale l 11"));
    EXPECT_TRUE(contains(r.out, "states 2 -> 12"));
    MachineFile kw = load_machine_file(path("kw.json"));
    EXPECT_EQ(std::get<RtKwqfa>(kw.machine).state_count, 12u);
    // Serialized amplitudes reload bit for bit.
    MachineFile again = parse_machine_file(serialize_machine_file(kw));
    EXPECT_EQ(std::get<RtKwqfa>(again.machine).unitaries, std::get<RtKwqfa>(kw.machine).unitaries);

    Result u = invoke({"convert", "union", path("kw.json"), path("kw.json"), "-o", path("u.json")});
    ASSERT_EQ(u.code, 0) << u.out << u.err;
    MachineFile uf = load_machine_file(path("u.json"));
    for (const char *w : {"", "a", "aaa"}) {
        EXPECT_NEAR(run_rtkwqfa(std::get<RtKwqfa>(uf.machine), w).p_acc,
                    run_rtkwqfa(std::get<RtKwqfa>(kw.machine), w).p_acc, 1e-12);
    }
}

TEST_F(CliTest, convert_rtpfa_to_rtqfa) {
    Result r = invoke({"convert", "rtpfa-to-rtqfa", kFixtures + "/fair_coin.json", "-o", path("q.json")});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    MachineFile q = load_machine_file(path("q.json"));
    EXPECT_NEAR(run_rtqfa(std::get<RtQfa>(q.machine), "a"), 0.5, 1e-12);
}

TEST_F(CliTest, convert_type_mismatch_is_usage_error) {
    EXPECT_EQ(invoke({"convert", "rtqfa-to-gfa", kFixtures + "/fair_coin.json", "-o", path("x.json")}).code, 2);
    EXPECT_EQ(invoke({"convert", "union", kFixtures + "/fair_coin.json", kFixtures + "/fair_coin.json", "-o",
                      path("x.json")})
                  .code,
              2);
    EXPECT_EQ(invoke({"convert", "teleport", kFixtures + "/fair_coin.json", "-o", path("x.json")}).code, 2);
    EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(CliTest, scan_empty_word_only) {
    Result r = invoke({"scan", kFixtures + "/lnh.json", "--oracle", "lnh", "--max-len", "0"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "\n\"\" 0.49999999999999978 ")) << r.out;
    EXPECT_TRUE(contains(r.out, " at nonmember yes\n"));
    EXPECT_TRUE(contains(r.out, "# strings 1  members 0  disagreements 0  undecided 0"));
}

TEST_F(CliTest, scan_is_deterministic_across_thread_counts) {
    Result one = invoke({"scan", kFixtures + "/lys.json", "--oracle", "lys", "--max-len", "7", "--threads", "1"});
    Result many = invoke({"scan", kFixtures + "/lys.json", "--oracle", "lys", "--max-len", "7", "--threads", "8"});
    EXPECT_EQ(one.code, 0) << one.out;
    EXPECT_EQ(one.out, many.out);
    EXPECT_TRUE(contains(one.out, "\"abaa\" "));
    EXPECT_TRUE(contains(one.out, "# strings 255  members 3  disagreements 0  undecided 0")) << one.out;
}

TEST_F(CliTest, scan_wrong_oracle_disagrees) {
    Result r = invoke({"scan", kFixtures + "/lnh.json", "--oracle", "lys", "--max-len", "4"});
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.out, " NO\n")) << r.out;
    EXPECT_EQ(invoke({"scan", kFixtures + "/lnh.json", "--oracle", "nope", "--max-len", "1"}).code, 2);
}

TEST(cli, decision_rule) {
    RunOutcome r;
    r.converged = true;
    r.p_acc = 0.5 + 1e-6;
    r.residual = 1e-8;
    EXPECT_EQ(cli::decide(r), cli::Decision::above);
    r.p_acc = 0.5 - 1e-6;
    EXPECT_EQ(cli::decide(r), cli::Decision::below);
    r.p_acc = 0.5 + 5e-9;
    EXPECT_EQ(cli::decide(r), cli::Decision::at);
    r.converged = false;
    EXPECT_EQ(cli::decide(r), cli::Decision::undecided);
    EXPECT_STREQ(cli::to_string(cli::Decision::undecided), "undecided");
}

TEST(cli, threads_from_env) {
    setenv("QFA_LAB_THREADS", "3", 1);
    EXPECT_EQ(cli::threads_from_env(), 3u);
    setenv("QFA_LAB_THREADS", "many", 1);
    EXPECT_EQ(cli::threads_from_env(), 0u);
    unsetenv("QFA_LAB_THREADS");
    EXPECT_EQ(cli::threads_from_env(), 0u);
}
