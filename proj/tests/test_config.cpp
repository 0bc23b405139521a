// Copyright 2026 The Sg2 Authors
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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "sg2/config.hpp"
#include "sg2/errors.hpp"

using namespace sg2;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.ini");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

const char* kReference = R"([source]
p1 = 0.029
g2_target = 0.05
C = 0.61
zeta0 = 1.34
tau1 = 3.64
pulse_period_ns = 6.575

[circuit]
delay_pulses = 4

[detection]
eta = 1.0
dark_prob = 0

[run]
n_pulses = 1e7
seed = 1
mode = sg2
max_lag = 50
)";

}  // namespace

TEST(Config, reference_source) {
    auto c = parse(kReference);
    const auto& x = c.experiment;
    EXPECT_DOUBLE_EQ(x.source.fock[1], 0.029);
    EXPECT_DOUBLE_EQ(x.source.fock[2], 0.05 * 0.029 * 0.029 / 2);
    EXPECT_DOUBLE_EQ(x.source.indistinguishability, 0.61);
    EXPECT_DOUBLE_EQ(x.source.zeta0, 1.34);
    EXPECT_DOUBLE_EQ(x.source.tau1, 3.64);
    EXPECT_EQ(x.circuit.delay_pulses(), 4);
    EXPECT_DOUBLE_EQ(x.circuit.bs2().r, M_SQRT1_2);
    EXPECT_EQ(x.n_pulses, 10000000u);
    EXPECT_EQ(x.seed, 1u);
    EXPECT_EQ(x.mode, MeasurementMode::Sg2);
    EXPECT_EQ(x.detection, Detection::Emulated);
    EXPECT_EQ(c.max_lag, 50);
}

TEST(Config, defaults) {
    auto c = parse("[source]\np1 = 0.1\n[run]\nn_pulses = 1000\n");
    EXPECT_DOUBLE_EQ(c.experiment.source.fock[2], 0.0);
    EXPECT_DOUBLE_EQ(c.experiment.source.indistinguishability, 1.0);
    EXPECT_DOUBLE_EQ(c.experiment.efficiency, 1.0);
    EXPECT_EQ(c.experiment.seed, 0u);
    EXPECT_EQ(c.max_lag, 50);
}

TEST(Config, round_trip_preserves_hash) {
    auto c = parse(kReference);
    c.experiment.circuit = CircuitModel(Beamsplitter(0.6, 0.8), Beamsplitter(0.8, 0.6), {}, 3);
    c.experiment.detection = Detection::NumberResolving;
    auto back = parse(format_config(c));
    EXPECT_EQ(back.experiment.hash(), c.experiment.hash());
    EXPECT_EQ(back.max_lag, c.max_lag);
}

TEST(Config, explicit_p2_and_partial_splitter) {
    auto c = parse("[source]\np1 = 0.1\np2 = 0.002\n[circuit]\nr2 = 0.6\n[run]\nn_pulses = 10\n");
    EXPECT_DOUBLE_EQ(c.experiment.source.fock[2], 0.002);
    EXPECT_NEAR(c.experiment.circuit.bs2().t, 0.8, 1e-15);
}

TEST(Config, errors_name_the_key) {
    EXPECT_NE(error_of("[source]\np1 = 0.1\nbogus = 1\n[run]\nn_pulses = 1\n").find("[source] bogus: unknown key"),
              std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = 0.1\n[extra]\nx = 1\n[run]\nn_pulses = 1\n").find("unknown section"), std::string::npos);
    EXPECT_NE(error_of("[run]\nn_pulses = 1\n").find("[source] p1: required"), std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = 0.1\n").find("[run] n_pulses: required"), std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = abc\n[run]\nn_pulses = 1\n").find("expected a number"), std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = 0.1\ng2_target = 0.1\np2 = 0.01\n[run]\nn_pulses = 1\n").find("not both"),
              std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = 0.1\n[run]\nn_pulses = 1.5\n").find("integer"), std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = 0.1\n[run]\nn_pulses = 1\nmode = hom\n").find("[run] mode"), std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = 0.1\n[circuit]\nr2 = 0.6\nt2 = 0.6\n[run]\nn_pulses = 1\n").find("[circuit] r2/t2"),
              std::string::npos);
    EXPECT_NE(error_of("[source]\np1 = 0.1\n[detection]\nnumber_resolving = maybe\n[run]\nn_pulses = 1\n").find("true or false"),
              std::string::npos);
}

TEST(Config, module_invariants_checked_before_use) {
    EXPECT_FALSE(error_of("[source]\np1 = 0.1\nC = 1.2\n[run]\nn_pulses = 1\n").empty());
    EXPECT_FALSE(error_of("[source]\np1 = 0.1\nzeta0 = 0.5\n[run]\nn_pulses = 1\n").empty());
    EXPECT_FALSE(error_of("[source]\np1 = 0.1\n[detection]\neta = 0\n[run]\nn_pulses = 1\n").empty());
    EXPECT_FALSE(error_of("[source]\np1 = 0.1\n[run]\nn_pulses = 0\n").empty());
    EXPECT_FALSE(error_of("[source]\np1 = 0.9\np2 = 0.2\n[run]\nn_pulses = 1\n").empty());
    EXPECT_FALSE(error_of("[source]\np1 = 0.1\n[source]\np1 = 0.2\n[run]\nn_pulses = 1\n").empty());
}

TEST(Config, missing_file_is_io_error) { EXPECT_THROW(load_config("/nonexistent/sg2.ini"), IoError); }
