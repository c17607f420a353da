#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "biorth/commands.hpp"
#include "biorth/io.hpp"
#include "support.hpp"

using namespace biorth;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path()
            / ("biorth_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cli::FitRequest request(const std::string& family, unsigned k, const fs::path& input, const fs::path& out)
{
    cli::FitRequest r;
    r.family = family;
    r.k = k;
    r.input = input;
    r.out_dir = out;
    return r;
}

} // namespace

TEST(Csv, RoundTrip)
{
    TempDir dir;
    const SampleSet s = scenarios::noisy_chirp(1, 11);
    write_samples_csv(dir.path() / "s.csv", s);
    const SampleSet back = read_samples_csv(dir.path() / "s.csv");
    EXPECT_EQ(back.xs, s.xs);
    EXPECT_EQ(back.ys, s.ys);
}

TEST(Csv, Defects)
{
    TempDir dir;
    const auto expect_malformed = [&](const std::string& text, const std::string& fragment) {
        const fs::path p = dir.path() / "bad.csv";
        write_file(p, text);
        try {
            (void)read_samples_csv(p);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MalformedInput);
            EXPECT_NE(std::string(e.what()).find("bad.csv"), std::string::npos);
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    expect_malformed("", "empty");
    expect_malformed("a,b\n1,2\n", "header");
    expect_malformed("x,y\n", "no data");
    expect_malformed("x,y\n0,1\n0.5,abc\n", ":3:");
    expect_malformed("x,y\n0,1,2\n", ":2:");
    EXPECT_THROW((void)read_samples_csv(dir.path() / "missing.csv"), Error);
}

TEST(Csv, ToleratesCrlfAndBlankLines)
{
    TempDir dir;
    write_file(dir.path() / "s.csv", "x,y\r\n0,1\r\n\r\n0.5, 2\r\n1,3\r\n");
    const SampleSet s = read_samples_csv(dir.path() / "s.csv");
    EXPECT_EQ(s.ys, (std::vector<double>{1, 2, 3}));
}

TEST(ModelJson, Schema)
{
    const FitModel m = scenarios::exact_laguerre_expdecay(2);
    const auto j = model_to_json(m);
    EXPECT_EQ(j["family"], "laguerre");
    EXPECT_EQ(j["exponents"], nlohmann::json({0, 1, 2}));
    EXPECT_TRUE(j["coeffs"][0].is_string());
    EXPECT_EQ(j["coeffs_exact"][0], "7/8");
    for (const char* key : {"l2_error", "max_abs_error", "bic", "n_params"}) EXPECT_TRUE(j["diagnostics"].contains(key));
    const FitModel back = model_from_json(j);
    EXPECT_EQ(back.coeffs, m.coeffs);
    EXPECT_EQ(*back.coeffs_exact, *m.coeffs_exact);

    FitModel shifted{{0, 3}, {0.1, -2.5}, std::nullopt, FamilySpec::legendre_shifted(Rational(5, 2)), {}, {}};
    const auto js = model_to_json(shifted);
    EXPECT_EQ(js["params"]["b"], "5/2");
    EXPECT_TRUE(js["coeffs_exact"][1].is_null());
    EXPECT_EQ(model_from_json(js).family.b(), Rational(5, 2));
}

TEST(ModelJson, RejectsMalformed)
{
    EXPECT_THROW((void)model_from_json(nlohmann::json::parse(R"({"family":"laguerre"})")), Error);
    EXPECT_THROW((void)model_from_json(nlohmann::json::parse(
                     R"({"family":"laguerre","params":{},"exponents":[0,1],"coeffs":["1"],"coeffs_exact":[null],
                         "diagnostics":{"l2_error":0,"max_abs_error":0,"bic":0,"n_params":1}})")),
                 Error);
}

TEST(CmdFit, ChirpSamples)
{
    TempDir dir;
    write_samples_csv(dir.path() / "chirp.csv", scenarios::noisy_chirp(42));
    std::ostringstream out, err;
    auto req = request("legendre0b", 17, dir.path() / "chirp.csv", dir.path() / "out");
    ASSERT_EQ(cli::cmd_fit(req, out, err), cli::kOk) << err.str();

    const FitModel model = read_model_json(dir.path() / "out" / "model.json");
    EXPECT_EQ(model.coeffs.size(), 18u);
    EXPECT_EQ(model.diagnostics.n_params, 18u);

    // Reloaded model reproduces the residuals table.
    std::ifstream res(dir.path() / "out" / "residuals.csv");
    std::string line;
    std::getline(res, line);
    EXPECT_EQ(line, "x,y,fit,abs_error");
    std::size_t rows = 0;
    while (std::getline(res, line)) {
        std::stringstream ss(line);
        std::string x, y, f;
        std::getline(ss, x, ',');
        std::getline(ss, y, ',');
        std::getline(ss, f, ',');
        const double fit = std::stod(f);
        EXPECT_LE(std::abs(model.eval(std::stod(x)) - fit), 1e-12 * std::max(1.0, std::abs(fit)));
        ++rows;
    }
    EXPECT_EQ(rows, 501u);
}

TEST(CmdFit, RemovalsAndTargetError)
{
    TempDir dir;
    write_samples_csv(dir.path() / "chirp.csv", scenarios::noisy_chirp(42));
    std::ostringstream out, err;
    auto req = request("legendre0b", 17, dir.path() / "chirp.csv", dir.path() / "a");
    req.removals = 3;
    ASSERT_EQ(cli::cmd_fit(req, out, err), cli::kOk);
    const auto j = nlohmann::json::parse(read_file(dir.path() / "a" / "model.json"));
    EXPECT_EQ(j["exponents"].size(), 15u);
    EXPECT_EQ(j["removed"].size(), 3u);

    req.removals.reset();
    req.target_error = 1e9;
    req.out_dir = dir.path() / "b";
    ASSERT_EQ(cli::cmd_fit(req, out, err), cli::kOk);
    EXPECT_EQ(read_model_json(dir.path() / "b" / "model.json").n_params(), 1u);
}

TEST(CmdFit, ExitCodes)
{
    TempDir dir;
    std::ostringstream out, err;
    write_file(dir.path() / "empty.csv", "");
    EXPECT_EQ(cli::cmd_fit(request("legendre0b", 3, dir.path() / "empty.csv", dir.path() / "o"), out, err),
              cli::kMalformedInput);
    EXPECT_NE(err.str().find("empty.csv"), std::string::npos);

    write_file(dir.path() / "wide.csv", "x,y\n-1,0\n0,1\n1.5,2\n");
    EXPECT_EQ(cli::cmd_fit(request("legendre", 2, dir.path() / "wide.csv", dir.path() / "o"), out, err),
              cli::kDomainMismatch);

    write_file(dir.path() / "ok.csv", "x,y\n0,0\n0.5,1\n1,2\n");
    EXPECT_EQ(cli::cmd_fit(request("laguerre", 2, dir.path() / "ok.csv", dir.path() / "o"), out, err),
              cli::kDomainMismatch);
    EXPECT_EQ(cli::cmd_fit(request("chebyshev", 2, dir.path() / "ok.csv", dir.path() / "o"), out, err),
              cli::kDomainMismatch);
    EXPECT_EQ(cli::cmd_fit(request("hermite", 2, dir.path() / "ok.csv", dir.path() / "o"), out, err), cli::kUsage);
    EXPECT_EQ(cli::cmd_fit(request("legendre0b", 65, dir.path() / "ok.csv", dir.path() / "o"), out, err),
              cli::kUsage);
    auto too_many = request("legendre0b", 2, dir.path() / "ok.csv", dir.path() / "o");
    too_many.removals = 3;
    EXPECT_EQ(cli::cmd_fit(too_many, out, err), cli::kUsage);

    write_file(dir.path() / "uneven.csv", "x,y\n0,0\n0.1,1\n1,2\n");
    EXPECT_EQ(cli::cmd_fit(request("legendre0b", 2, dir.path() / "uneven.csv", dir.path() / "o"), out, err),
              cli::kMalformedInput);
}

TEST(CmdTables, Rows)
{
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_tables("laguerre", 1, 1, out, err), cli::kOk);
    EXPECT_EQ(out.str(), "β_0: 2 - x\nβ_1: -1 + x\n");

    for (const std::string fam : {"legendre0b", "laguerre", "legendre", "chebyshev"}) {
        std::ostringstream o;
        ASSERT_EQ(cli::cmd_tables(fam, 1, 0, o, err), cli::kOk);
        const std::string s = o.str();
        EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1) << fam;
        EXPECT_EQ(s.find('x'), std::string::npos) << s;
    }

    EXPECT_EQ(cli::cmd_tables("laguerre", 1, 21, out, err), cli::kUsage);
}

TEST(CmdTables, ShiftedLegendreDenominatorsArePowersOfTwo)
{
    const BiorthSet s = build(FamilySpec::legendre_shifted(2), 1);
    for (unsigned n : s.active())
        for (const Rational& c : s.beta(n).coeffs()) {
            BigInt d = boost::multiprecision::denominator(c);
            while (d % 2 == 0) d /= 2;
            EXPECT_EQ(d, 1) << to_string(c);
        }
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_tables("legendre0b", 2, 1, out, err), cli::kOk);
    EXPECT_NE(out.str().find("/2"), std::string::npos);
}

TEST(CmdExample, ChirpIsDeterministic)
{
    TempDir dir;
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_example(1, 7, dir.path() / "a", out, err), cli::kOk) << err.str();
    ASSERT_EQ(cli::cmd_example(1, 7, dir.path() / "b", out, err), cli::kOk);
    for (const char* f : {"report.json", "samples.csv", "curves.csv"}) {
        const std::string a = read_file(dir.path() / "a" / f);
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(a, read_file(dir.path() / "b" / f)) << f;
    }
    ASSERT_EQ(cli::cmd_example(1, 8, dir.path() / "c", out, err), cli::kOk);
    EXPECT_NE(read_file(dir.path() / "a" / "report.json"), read_file(dir.path() / "c" / "report.json"));
    const auto j = nlohmann::json::parse(read_file(dir.path() / "a" / "report.json"));
    EXPECT_EQ(j["removed"].size(), 3u);
    EXPECT_EQ(j["models"]["full"]["exponents"].size(), 18u);
}

TEST(CmdExample, AnalyticReport)
{
    TempDir dir;
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_example(2, 42, dir.path(), out, err), cli::kOk);
    const auto j = nlohmann::json::parse(read_file(dir.path() / "report.json"));
    ASSERT_EQ(j["cases"].size(), 4u);
    EXPECT_EQ(j["cases"][0]["family"], "laguerre");
    EXPECT_EQ(j["cases"][0]["k"], 14);
    EXPECT_LT(std::abs(j["cases"][0]["max_error"].get<double>() - 2.62e-4), 0.05 * 2.62e-4);
    EXPECT_TRUE(fs::exists(dir.path() / "expdecay.csv"));
    EXPECT_TRUE(fs::exists(dir.path() / "gamma.csv"));
    EXPECT_EQ(cli::cmd_example(4, 42, dir.path(), out, err), cli::kUsage);
}

TEST(CliBinary, Subcommands)
{
    TempDir dir;
    const std::string bin = BIORTH_CLI_PATH;
    const auto run = [&](const std::string& args) {
        const int status = std::system((bin + " " + args + " > " + (dir.path() / "stdout").string() + " 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    EXPECT_EQ(run("tables --family laguerre --k 1"), 0);
    EXPECT_EQ(read_file(dir.path() / "stdout"), "β_0: 2 - x\nβ_1: -1 + x\n");
    EXPECT_EQ(run("tables --family legendre0b --b 3/2 --k 2"), 0);
    EXPECT_EQ(run("bogus"), 1);
    EXPECT_EQ(run("fit --family legendre0b --k 3"), 1);
    write_file(dir.path() / "empty.csv", "");
    EXPECT_EQ(run("fit --family legendre0b --k 3 --input " + (dir.path() / "empty.csv").string() + " --out "
                  + (dir.path() / "o").string()),
              2);
    EXPECT_EQ(run("example 2 --out " + (dir.path() / "ex2").string()), 0);
    EXPECT_TRUE(fs::exists(dir.path() / "ex2" / "report.json"));
}
