// SPDX-License-Identifier: Apache-2.0
//
// guardbeam - mmWave guard-beam blockage prediction toolkit
// Copyright (C) 2026 The guardbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include "guardbeam/config.hpp"
#include "guardbeam/trace.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace guardbeam;
namespace fs = std::filesystem;

namespace
{
struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, bool color = false)
{
    std::ostringstream out, err;
    const int code = cli::run(args, {out, err, color});
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

// Value of a "prefix.key,value" footer row
std::string footer(const std::string &csv, const std::string &key)
{
    for (const auto &l : lines(csv))
        if (l.rfind(key + ",", 0) == 0)
            return l.substr(key.size() + 1);
    return "<missing>";
}

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("guardbeam_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    std::string write(const std::string &name, const std::string &text) const
    {
        std::ofstream(dir_ / name, std::ios::binary) << text;
        return path(name);
    }
    static std::string preset(const std::string &name) { return std::string(GUARDBEAM_CONFIG_DIR) + "/" + name; }

    fs::path dir_;
};
} // namespace

TEST_F(CliTest, HelpAndUsageErrors)
{
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"bogus"}).code, 1);
    EXPECT_EQ(run({"range", "--runs", "x"}).code, 1);
}

TEST_F(CliTest, PresetFilesMatchBuiltInPresets)
{
    for (const auto &p : beam_presets())
    {
        const auto cfg = load_config(preset(p.name + ".cfg"));
        const Experiment a(cfg), b(p.config);
        EXPECT_EQ(cfg.guards, p.config.guards) << p.name;
        EXPECT_EQ(cfg.detector.beams, p.config.detector.beams) << p.name;
        EXPECT_EQ(resolve_threshold(a, cfg.detector.beams), resolve_threshold(b, p.config.detector.beams)) << p.name;
    }
}

TEST_F(CliTest, RangeSingleRunIsDeterministic)
{
    const auto a = run({"range", "--config", preset("main7.cfg"), "--runs", "1", "--seed", "42"});
    const auto b = run({"range", "--config", preset("main7.cfg"), "--runs", "1", "--seed", "42"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto l = lines(a.out);
    EXPECT_EQ(l[0], "run_id,trajectory_id,seed,triggered,r_det_mm,t_d_ms,t_s_ms,t_p_ms,class");
    EXPECT_EQ(l[1].rfind("0,0,", 0), 0u);
    EXPECT_EQ(footer(a.out, "summary.runs"), "1");
    EXPECT_EQ(l[2].rfind("summary.", 0), 0u);
}

TEST_F(CliTest, RangeWithoutReflectionNeverTriggers)
{
    const auto cfg = write("dark.cfg", "scene.reflection_coeff = 0\n");
    const auto r = run({"range", "--config", cfg, "--runs", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    int rows = 0;
    for (const auto &l : lines(r.out))
        if (!l.empty() && std::isdigit(static_cast<unsigned char>(l[0])))
        {
            ++rows;
            EXPECT_NE(l.find(",false,"), std::string::npos) << l;
        }
    EXPECT_EQ(rows, 9);
    EXPECT_EQ(footer(r.out, "summary.mean_r_det_mm"), "");
}

TEST_F(CliTest, InvalidBeamSubsetIsUserError)
{
    const auto r = run({"range", "--beams", "main+guard7", "--runs", "2"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("guard7"), std::string::npos);
    EXPECT_EQ(run({"range", "--beams", "sideways"}).code, 1);
    EXPECT_EQ(run({"range", "--runs", "0"}).code, 1);
}

TEST_F(CliTest, ConfigErrorsAreUserErrors)
{
    const auto cfg = write("typo.cfg", "scene.frequncy_ghz = 26\n");
    const auto r = run({"range", "--config", cfg});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("unknown config key 'scene.frequncy_ghz'"), std::string::npos);
    EXPECT_EQ(run({"range", "--config", path("missing.cfg")}).code, 2);
}

TEST_F(CliTest, UnwritableOutputIsIoError)
{
    const auto r = run({"fov", "--xmin", "2", "--xmax", "2.1", "--ymin", "0.2", "--ymax", "0.3", "--res", "0.05",
                        "--out", "/nonexistent-dir/grid.csv"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST_F(CliTest, FovGridOutput)
{
    const auto out = path("grid.csv");
    const auto r = run({"fov", "--xmin", "2.4", "--xmax", "2.6", "--ymin", "-0.2", "--ymax", "0.2", "--res", "0.005",
                        "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.err.empty());
    const auto l = lines(slurp(out));
    EXPECT_EQ(l[0], "x_m,y_m,z_level");
    EXPECT_EQ(l.size(), 1u + 41u * 81u);
    int masked = 0;
    for (std::size_t i = 1; i < l.size(); ++i)
        masked += l[i].back() == ',';
    EXPECT_GT(masked, 0);
    EXPECT_EQ(parse_config(slurp(out + ".meta").substr(slurp(out + ".meta").find("scene."))), ExperimentConfig{});
}

TEST_F(CliTest, FovEmptyGridAndCoarseWarning)
{
    const auto empty = run({"fov", "--xmin", "1", "--xmax", "1", "--ymin", "0", "--ymax", "1"});
    EXPECT_EQ(empty.code, 1);
    EXPECT_NE(empty.err.find("empty grid"), std::string::npos);

    const auto coarse = run({"fov", "--xmin", "0", "--xmax", "5", "--ymin", "0.2", "--ymax", "1", "--res", "0.1"});
    EXPECT_EQ(coarse.code, 0);
    EXPECT_NE(coarse.err.find("warning:"), std::string::npos);
    EXPECT_EQ(coarse.err.find('\033'), std::string::npos);
    EXPECT_GT(lines(coarse.out).size(), 10u);

    const auto colored = run({"fov", "--xmin", "0", "--xmax", "1", "--ymin", "0.2", "--ymax", "1", "--res", "0.1"}, true);
    EXPECT_NE(colored.err.find('\033'), std::string::npos);
}

TEST_F(CliTest, SimulateWritesTraceAndMeta)
{
    const auto cfg = write("walk.cfg", "trajectory.count = 1\n"
                                       "trajectory.1.start_x_m = -3\n"
                                       "trajectory.1.start_y_m = 1\n"
                                       "trajectory.1.heading_deg = 0\n");
    const auto a = path("a.csv");
    const auto b = path("b.csv");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--seed", "9", "--out", a}).code, 0);
    ASSERT_EQ(run({"simulate", "--config", cfg, "--seed", "9", "--out", b}).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a + ".meta"), slurp(b + ".meta"));
    std::ifstream in(a);
    const auto trace = read_trace(in);
    EXPECT_EQ(trace.times.size(), 500u);
    EXPECT_EQ(trace.beams.size(), 3u);
    EXPECT_EQ(lines(slurp(a)).size(), 1u + 500u * 3u);
    EXPECT_EQ(slurp(a + ".meta").find("meta.t_s_ms"), std::string::npos);

    const auto c = path("c.csv");
    ASSERT_EQ(run({"simulate", "--trajectory", "1", "--seed", "9", "--out", c}).code, 0);
    std::ifstream mf(c + ".meta");
    const auto meta = read_meta(mf);
    ASSERT_TRUE(meta.t_s);
    EXPECT_EQ(meta.seed, 9u);
    EXPECT_EQ(meta.trajectory, 1);
    EXPECT_EQ(parse_config(meta.config_echo), ExperimentConfig{});

    EXPECT_EQ(run({"simulate", "--seed", "1"}).code, 1); // needs --out
    EXPECT_EQ(run({"simulate", "--trajectory", "7", "--out", path("d.csv")}).code, 1);
}

TEST_F(CliTest, SimulateThenDetectMatchesInProcess)
{
    const auto trace = path("run.csv");
    ASSERT_EQ(run({"simulate", "--trajectory", "2", "--seed", "31", "--out", trace}).code, 0);
    const auto r = run({"detect", trace});
    ASSERT_EQ(r.code, 0) << r.err;

    const Experiment exp(ExperimentConfig{});
    const auto tr = simulate_trajectory(exp, 2, 31);
    const auto dcfg = exp.detector_config(exp.config().detector.beams, 0.03);
    const auto det = detect(tr.levels(dcfg.beams), dcfg);
    const auto o = make_outcome(det, tr.truth);
    EXPECT_EQ(footer(r.out, "report.t_d_ms"), o.t_d ? std::to_string(o.t_d->count()) : "");
    EXPECT_EQ(footer(r.out, "report.t_p_ms"), o.t_p ? std::to_string(o.t_p->count()) : "");
    EXPECT_EQ(footer(r.out, "report.class"), std::string(to_string(o.cls)));
    EXPECT_EQ(lines(r.out)[0], "t_ms,z_level,sigma,crossed");
}

TEST_F(CliTest, DetectReportsConstantTraceAsNoDetection)
{
    std::string text = "t_ms,beam,i,q\n";
    for (int k = 0; k < 50; ++k)
        text += std::to_string(10 * k) + ",main,1,0\n";
    const auto r = run({"detect", write("flat.csv", text)});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(footer(r.out, "report.result"), "no detection");
    EXPECT_EQ(footer(r.out, "report.class"), "<missing>");
}

TEST_F(CliTest, DetectErrors)
{
    std::string shorty = "t_ms,beam,i,q\n";
    for (int k = 0; k < 5; ++k)
        shorty += std::to_string(10 * k) + ",main,1,0\n";
    const auto s = run({"detect", write("short.csv", shorty)});
    EXPECT_EQ(s.code, 1);
    EXPECT_NE(s.err.find("insufficient data"), std::string::npos);

    const auto bad = run({"detect", write("bad.csv", "t_ms,beam,i,q\n0,main,1,0\n20,main,1,0\n10,main,1,0\n")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("line 4: non-monotone time"), std::string::npos);

    EXPECT_EQ(run({"detect", path("absent.csv")}).code, 2);

    const auto stride = run({"detect", write("stride.csv", "t_ms,beam,i,q\n0,main,1,0\n20,main,1,0\n")});
    EXPECT_EQ(stride.code, 1);
}

TEST_F(CliTest, SweepRowsAndConsistencyWithRange)
{
    const auto r = run({"sweep", "--config", preset("main7.cfg"), "--thresholds", "0.02,0.03,0.05", "--runs", "30"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "sigma_th,mean_tp_ms,accuracy");
    double prev = 1e300;
    for (std::size_t i = 1; i < l.size(); ++i)
    {
        const auto f = l[i].substr(l[i].find(',') + 1);
        const double tp = std::stod(f.substr(0, f.find(',')));
        EXPECT_LE(tp, prev);
        prev = tp;
    }

    const auto cfg = write("th.cfg", "detector.sigma_th = 0.04\n");
    const auto sweep = run({"sweep", "--config", cfg, "--thresholds", "0.04", "--runs", "20", "--approach", "slow"});
    const auto range = run({"range", "--config", cfg, "--runs", "20", "--approach", "slow"});
    ASSERT_EQ(sweep.code, 0);
    ASSERT_EQ(range.code, 0);
    const auto row = lines(sweep.out).at(1);
    EXPECT_EQ(row, "0.040000000000000001," + footer(range.out, "summary.mean_t_p_ms") + "," +
                       footer(range.out, "summary.accuracy"));

    EXPECT_EQ(run({"sweep", "--thresholds", "0.03,-1"}).code, 1);
    EXPECT_EQ(run({"sweep", "--thresholds", "0"}).code, 1);
    EXPECT_EQ(run({"sweep"}).code, 1);
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossThreadCounts)
{
    const auto one = run({"range", "--runs", "12", "--threads", "1"});
    const auto many = run({"range", "--runs", "12", "--threads", "4"});
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, many.out);
}
