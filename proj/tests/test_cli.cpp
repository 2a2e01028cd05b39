// End-to-end checks of the command-line binary: exit codes, output formats
// and byte-level determinism.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(GKSL_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/gksl_cli_test_") + name;
}

}  // namespace

TEST_CASE("decay command") {
    SUBCASE("forbidden decay reports zeros and exits 0") {
        const auto r = run("decay --lambda 1 --ms 1 --me 0.6 --samples 2000");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("decay_rate_closed = 0.0") != std::string::npos);
        CHECK(r.out.find("decay_rate_numeric = 0.0") != std::string::npos);
    }
    SUBCASE("open decay prints both routes and the ratio") {
        const auto r = run("decay --lambda 1 --ms 1 --me 0.1 --samples 2000");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("decay_rate_closed = 9.79795897113e-01") != std::string::npos);
        CHECK(r.out.find("numeric_over_closed = 5.0000") != std::string::npos);
    }
    SUBCASE("missing required mass is a usage error") {
        const auto r = run("decay --lambda 1 --me 0.1");
        CHECK(r.exit_code == 1);
    }
    SUBCASE("invalid physics input exits 1") {
        const auto r = run("decay --lambda 1 --ms -2 --me 0.1");
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("loop-a command") {
    SUBCASE("low-energy limit value") {
        const auto r = run("loop-a --s 0 --t 0 --u 0 --ms 0 --me 1");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("im_a = 1.8997721") != std::string::npos);
    }
    SUBCASE("t-u swap gives identical reported values") {
        const auto a = run("loop-a --s -2 --t 0.5 --u 1.14 --ms 0.3 --me 1");
        const auto b = run("loop-a --s -2 --t 1.14 --u 0.5 --ms 0.3 --me 1");
        CHECK(a.exit_code == 0);
        const auto grab = [](const std::string& s, const char* key) {
            const auto pos = s.find(key);
            return s.substr(pos, s.find('\n', pos) - pos);
        };
        CHECK(grab(a.out, "im_a") == grab(b.out, "im_a"));
    }
    SUBCASE("unknown flag is a usage error") {
        const auto r = run("loop-a --s 0 --t 0 --u 0 --bogus 1");
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("sigma-scan command") {
    const std::string out1 = tmp_path("scan1.csv");
    const std::string out2 = tmp_path("scan2.csv");
    const std::string base =
        "sigma-scan --x-min 0.6 --x-max 2.4 --steps 5 --samples 4000 --out ";

    SUBCASE("header contract and below-threshold zeros") {
        const auto r = run(base + out1);
        CHECK(r.exit_code == 0);
        std::ifstream in(out1);
        std::string header;
        std::getline(in, header);
        CHECK(header == "x,delta_rad,sigma_closed,sigma_numeric,numeric_error");
        std::string line;
        int rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            if (line.substr(0, 3) == "6.0") {  // x = 0.6 rows
                CHECK(line.find(",0.00000000000e+00,") != std::string::npos);
            }
        }
        CHECK(rows == 15);
    }

    SUBCASE("byte-identical across repeated runs and worker counts") {
        CHECK(run(base + out1).exit_code == 0);
        CHECK(run(base + out2, "GKSL_THREADS=2").exit_code == 0);
        const std::string a = slurp(out1), b = slurp(out2);
        CHECK(a.size() > 0);
        CHECK(a == b);
    }

    SUBCASE("unwritable output path exits 1") {
        const auto r = run(base + "/nonexistent_dir/out.csv");
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("evolve command") {
    const std::string state = tmp_path("state.txt");

    SUBCASE("vacuum input stays constant") {
        {
            std::ofstream f(state);
            f << "# vacuum\n0 1 0\n";
        }
        const auto r = run("evolve --lambda 1 --ms 3 --me 1 --state " + state +
                           " --steps 3 --dt 0.01 --grid-l 6 --n-max 1");
        CHECK(r.exit_code == 0);
        std::istringstream is(r.out);
        std::string line;
        int vacuum_rows = 0;
        while (std::getline(is, line))
            if (line.find(",1.00000000000e+00,1.00000000000e+00,1.00000000000e+00,") !=
                std::string::npos)
                ++vacuum_rows;
        CHECK(vacuum_rows == 4);  // steps 0..3 all identical
    }

    SUBCASE("trace column stays at one") {
        {
            std::ofstream f(state);
            f << "1 0 0 0 0.8 0\n1 1 0 0 0.6 0\n";
        }
        const auto r = run("evolve --lambda 0.5 --ms 3 --me 1 --state " + state +
                           " --steps 4 --dt 0.02 --grid-l 6 --n-max 1");
        CHECK(r.exit_code == 0);
        std::istringstream is(r.out);
        std::string line;
        int rows = 0;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("step,", 0) == 0) continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            REQUIRE(c1 != std::string::npos);
            const double trace = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            CHECK(std::abs(trace - 1.0) <= 1e-9);
            ++rows;
        }
        CHECK(rows == 5);
    }

    SUBCASE("malformed state file names the line") {
        {
            std::ofstream f(state);
            f << "0 1 0\n1 zz 0 0 1 0\n";
        }
        const auto r = run("evolve --ms 3 --me 1 --state " + state + " --steps 1 --dt 0.01");
        CHECK(r.exit_code == 1);
        CHECK(r.out.find(":2:") != std::string::npos);
    }

    SUBCASE("mode off the grid is an input error") {
        {
            std::ofstream f(state);
            f << "1 5 0 0 1 0\n";
        }
        const auto r = run("evolve --ms 3 --me 1 --state " + state +
                           " --steps 1 --dt 0.01 --n-max 1");
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("check command") {
    SUBCASE("unknown suite is a usage error") {
        const auto r = run("check --suite nonsense");
        CHECK(r.exit_code == 1);
    }
    SUBCASE("sum rule below threshold trivially passes") {
        const auto r = run("check --suite sumrule --lambda 1 --ms 1 --me 0.9 --samples 2000");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("CHECK sumrule PASS") != std::string::npos);
        CHECK(r.out.find("below threshold") != std::string::npos);
    }
    SUBCASE("sum rule above threshold passes at the 2% gate") {
        const auto r = run("check --suite sumrule --lambda 1 --ms 3 --me 1 --samples 400000");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("CHECK sumrule PASS") != std::string::npos);
    }
}

TEST_CASE("config file merge") {
    const std::string cfg = tmp_path("run.cfg");
    {
        std::ofstream f(cfg);
        f << "# resolved defaults for a reproducible run\n";
        f << "lambda = 2.0\n";
        f << "ms = 1.0\n";
        f << "me = 0.1\n";
    }
    // config supplies lambda/ms/me; the command line overrides lambda
    const auto r = run("decay --config " + cfg + " --lambda 1 --samples 2000");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("# lambda = 1.00000000000e+00") != std::string::npos);
    CHECK(r.out.find("# ms = 1.00000000000e+00") != std::string::npos);
    CHECK(r.out.find("decay_rate_closed = 9.79795897113e-01") != std::string::npos);
}
