// Contract tests for the command-line tool: runs the built binary through
// std::system and checks exit codes, files and printed tables. The binary
// path arrives as the first plain argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace {

std::string g_cli;
std::filesystem::path g_dir;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::filesystem::path out = g_dir / "stdout.txt";
    const std::filesystem::path err = g_dir / "stderr.txt";
    const std::string cmd = env_prefix + "\"" + g_cli + "\" " + args + " > \"" + out.string() +
                            "\" 2> \"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

std::size_t count_lines(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n' ? 1 : 0;
    return lines;
}

std::size_t header_fields(const std::string& text) {
    const std::string header = text.substr(0, text.find('\n'));
    return static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
}

std::string path_of(const std::string& name) {
    return (g_dir / name).string();
}

}  // namespace

TEST_CASE("generate: banana with 58 noise features gives 960 rows x 60 features") {
    const std::string csv = path_of("banana.csv");
    RunResult r = run("generate --shape banana --n 960 --noise-features 58 --out " + csv);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("960 rows, 60 feature columns") != std::string::npos);
    const std::string content = slurp(csv);
    CHECK(count_lines(content) == 961);          // header + 960 rows
    CHECK(header_fields(content) == 61);         // 60 features + label
}

TEST_CASE("generate: a single-point circle") {
    const std::string csv = path_of("circle1.csv");
    RunResult r = run("generate --shape circle --n 1 --noise-features 0 --out " + csv);
    CHECK(r.exit_code == 0);
    CHECK(count_lines(slurp(csv)) == 2);
}

TEST_CASE("generate: missing --shape is a usage error and writes nothing") {
    const std::string csv = path_of("missing.csv");
    RunResult r = run("generate --n 5 --out " + csv);
    CHECK(r.exit_code == 2);
    CHECK(!std::filesystem::exists(csv));
}

TEST_CASE("generate: unknown shape name is a usage error") {
    RunResult r = run("generate --shape pretzel --n 5 --out " + path_of("pretzel.csv"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("fit: --k-default records ceil(2*sqrt(d)) masks; --k overrides") {
    const std::string csv = path_of("fit_data.csv");
    REQUIRE(run("generate --shape banana --n 50 --noise-features 58 --out " + csv).exit_code == 0);

    RunResult r = run("fit --data " + csv + " --k-default --epochs 2 --model " +
                      path_of("m_default.json"));
    CHECK(r.exit_code == 0);
    std::string text = slurp(path_of("m_default.json"));
    std::size_t masks = 0;
    // count detector entries via their input_dim fields
    for (std::size_t pos = 0; (pos = text.find("\"input_dim\"", pos)) != std::string::npos; ++pos) {
        ++masks;
    }
    CHECK(masks == 16 + 1);  // 16 detectors + the generator

    r = run("fit --data " + csv + " --k 30 --epochs 2 --model " + path_of("m_k30.json"));
    CHECK(r.exit_code == 0);
    text = slurp(path_of("m_k30.json"));
    masks = 0;
    for (std::size_t pos = 0; (pos = text.find("\"input_dim\"", pos)) != std::string::npos; ++pos) {
        ++masks;
    }
    CHECK(masks == 30 + 1);
}

TEST_CASE("fit: reruns with the same seed are byte-identical") {
    const std::string csv = path_of("fit_data2.csv");
    REQUIRE(run("generate --shape circle --n 40 --noise-features 3 --out " + csv).exit_code == 0);
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 3 --seed 7 --model " +
                path_of("m_a.json")).exit_code == 0);
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 3 --seed 7 --model " +
                path_of("m_b.json")).exit_code == 0);
    CHECK(slurp(path_of("m_a.json")) == slurp(path_of("m_b.json")));
}

TEST_CASE("fit: GSAAL_SEED applies only when no --seed flag is given") {
    const std::string csv = path_of("fit_data3.csv");
    REQUIRE(run("generate --shape circle --n 30 --noise-features 2 --out " + csv).exit_code == 0);
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 2 --model " + path_of("m_env.json"),
                "GSAAL_SEED=99 ").exit_code == 0);
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 2 --seed 99 --model " +
                path_of("m_flag.json")).exit_code == 0);
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 2 --seed 99 --model " +
                path_of("m_both.json"), "GSAAL_SEED=5 ").exit_code == 0);
    CHECK(slurp(path_of("m_env.json")) == slurp(path_of("m_flag.json")));
    CHECK(slurp(path_of("m_both.json")) == slurp(path_of("m_flag.json")));
}

TEST_CASE("fit: more masks than the dimension allows is a usage error") {
    const std::string csv = path_of("fit_cap.csv");
    std::ofstream(csv) << "x1,x2\n0.1,0.2\n0.3,0.4\n0.5,0.1\n0.2,0.9\n";
    RunResult r = run("fit --data " + csv + " --k 5 --epochs 1 --model " + path_of("m_cap.json"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("fit: config file supplies options, flags win over it") {
    const std::string csv = path_of("fit_cfg.csv");
    REQUIRE(run("generate --shape circle --n 30 --noise-features 2 --out " + csv).exit_code == 0);
    std::ofstream(path_of("run.ini")) << "seed=9\n";

    REQUIRE(run("fit --config " + path_of("run.ini") + " --data " + csv +
                " --k 3 --epochs 2 --model " + path_of("m_cfg.json")).exit_code == 0);
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 2 --seed 9 --model " +
                path_of("m_cfg_flag.json")).exit_code == 0);
    CHECK(slurp(path_of("m_cfg.json")) == slurp(path_of("m_cfg_flag.json")));

    // a flag overrides the same option from the config file
    REQUIRE(run("fit --config " + path_of("run.ini") + " --seed 11 --data " + csv +
                " --k 3 --epochs 2 --model " + path_of("m_cfg_over.json")).exit_code == 0);
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 2 --seed 11 --model " +
                path_of("m_over_flag.json")).exit_code == 0);
    CHECK(slurp(path_of("m_cfg_over.json")) == slurp(path_of("m_over_flag.json")));
}

TEST_CASE("fit: a non-numeric cell is a data error naming the position") {
    const std::string csv = path_of("bad.csv");
    std::ofstream(csv) << "x1,x2\n1.0,2.0\n3.0,oops\n";
    RunResult r = run("fit --data " + csv + " --k 1 --epochs 1 --model " + path_of("m_bad.json"));
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("row 3") != std::string::npos);
    CHECK(r.err.find("column 2") != std::string::npos);
}

TEST_CASE("score: training file scores are in [0,1]; parts concatenate exactly") {
    const std::string csv = path_of("sc.csv");
    REQUIRE(run("generate --shape banana --n 30 --noise-features 2 --out " + csv).exit_code == 0);
    const std::string model = path_of("m_sc.json");
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 3 --model " + model).exit_code == 0);

    RunResult r = run("score --model " + model + " --data " + csv + " --out " + path_of("s.csv"));
    CHECK(r.exit_code == 0);
    const std::string scores = slurp(path_of("s.csv"));
    CHECK(count_lines(scores) == 31);

    // split the data file into two parts, score each, compare with the whole
    std::ifstream in(csv);
    std::string header, line;
    std::getline(in, header);
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    std::ofstream a(path_of("part_a.csv")), b(path_of("part_b.csv"));
    a << header << '\n';
    b << header << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        (i < 12 ? a : b) << rows[i] << '\n';
    }
    a.close();
    b.close();
    REQUIRE(run("score --model " + model + " --data " + path_of("part_a.csv") + " --out " +
                path_of("s_a.csv")).exit_code == 0);
    REQUIRE(run("score --model " + model + " --data " + path_of("part_b.csv") + " --out " +
                path_of("s_b.csv")).exit_code == 0);
    const std::string sa = slurp(path_of("s_a.csv"));
    const std::string sb = slurp(path_of("s_b.csv"));
    CHECK(sa.substr(sa.find('\n') + 1) + sb.substr(sb.find('\n') + 1) ==
          scores.substr(scores.find('\n') + 1));
}

TEST_CASE("score: header-only input gives an empty scores file, exit 0") {
    const std::string csv = path_of("sc2.csv");
    REQUIRE(run("generate --shape circle --n 20 --noise-features 1 --out " + csv).exit_code == 0);
    const std::string model = path_of("m_sc2.json");
    REQUIRE(run("fit --data " + csv + " --k 2 --epochs 2 --model " + model).exit_code == 0);

    std::ofstream(path_of("empty.csv")) << "x1,x2,x3\n";
    RunResult r = run("score --model " + model + " --data " + path_of("empty.csv") + " --out " +
                      path_of("s_empty.csv"));
    CHECK(r.exit_code == 0);
    CHECK(slurp(path_of("s_empty.csv")) == "score\n");
}

TEST_CASE("score: dimension mismatch is a data error naming both dims") {
    const std::string csv = path_of("sc3.csv");
    REQUIRE(run("generate --shape circle --n 20 --noise-features 4 --out " + csv).exit_code == 0);
    const std::string model = path_of("m_sc3.json");
    REQUIRE(run("fit --data " + csv + " --k 3 --epochs 2 --model " + model).exit_code == 0);

    std::ofstream(path_of("narrow.csv")) << "x1,x2\n0.1,0.2\n";
    RunResult r = run("score --model " + model + " --data " + path_of("narrow.csv") + " --out " +
                      path_of("s_narrow.csv"));
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("2") != std::string::npos);
    CHECK(r.err.find("6") != std::string::npos);
}

TEST_CASE("eval: gsaal plus one baseline prints two AUC rows") {
    // small labeled set: a tight cluster plus far outliers
    const std::string csv = path_of("eval.csv");
    {
        std::ofstream out(csv);
        out << "x1,x2,label\n";
        for (int i = 0; i < 40; ++i) {
            out << 0.01 * i << ',' << 0.02 * ((i * 7) % 13) << ",0\n";
        }
        for (int i = 0; i < 6; ++i) out << 5.0 + i << ',' << 6.0 + i << ",1\n";
    }
    RunResult r = run("eval --data " + csv + " --k 2 --epochs 5 --baselines knn --report " +
                      path_of("report.csv"));
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 3);  // header + gsaal + knn
    CHECK(r.out.find("gsaal,") != std::string::npos);
    CHECK(r.out.find("knn,") != std::string::npos);
    const std::string report = slurp(path_of("report.csv"));
    CHECK(count_lines(report) == 3);
    CHECK(report.find("dataset,method,auc,seed") == 0);
}

TEST_CASE("bench: two-point n-sweep yields two timing rows") {
    RunResult r = run("bench --n-sweep 100,200 --k 3 --n-test 300 --epochs 1 --out " +
                      path_of("timing.csv"));
    CHECK(r.exit_code == 0);
    const std::string timing = slurp(path_of("timing.csv"));
    CHECK(count_lines(timing) == 3);
    CHECK(timing.find("n,d,k,fit_s,score_s,per_point_s") == 0);
}

TEST_CASE("grid: resolution 100 gives 10000 rows") {
    const std::string csv = path_of("grid_data.csv");
    REQUIRE(run("generate --shape circle --n 40 --noise-features 0 --out " + csv).exit_code == 0);
    const std::string model = path_of("m_grid.json");
    REQUIRE(run("fit --data " + csv + " --k 2 --epochs 2 --model " + model).exit_code == 0);
    RunResult r = run("grid --model " + model + " --resolution 100 --out " + path_of("grid.csv"));
    CHECK(r.exit_code == 0);
    CHECK(count_lines(slurp(path_of("grid.csv"))) == 10001);
}

TEST_CASE("generate-ia: writes train.csv and ten test splits") {
    const std::string dir = path_of("ia");
    RunResult r = run("generate-ia --outlier-type cluster --n-inliers 50 --n-outliers 10 --d 3 "
                      "--out-dir " + dir);
    CHECK(r.exit_code == 0);
    CHECK(count_lines(slurp(dir + "/train.csv")) == 41);  // header + 80% of 50
    for (int t = 1; t <= 10; ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "/test_%02d.csv", t);
        CHECK(std::filesystem::exists(dir + std::string(name)));
    }
}

TEST_CASE("mmd: the built-in example prints both statistics") {
    RunResult r = run("mmd --example --n 500");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("mmd2_myopic,") != std::string::npos);
    CHECK(r.out.find("mmd2_control,") != std::string::npos);
}

int main(int argc, char** argv) {
    std::vector<char*> doctest_args;
    doctest_args.push_back(argv[0]);
    for (int i = 1; i < argc; ++i) {
        if (g_cli.empty() && argv[i][0] != '-') {
            g_cli = argv[i];
        } else {
            doctest_args.push_back(argv[i]);
        }
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli <path to gsaal binary> [doctest args]\n");
        return 1;
    }
    g_dir = std::filesystem::temp_directory_path() /
            ("gsaal_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(g_dir);

    doctest::Context context(static_cast<int>(doctest_args.size()), doctest_args.data());
    const int rc = context.run();
    std::filesystem::remove_all(g_dir);
    return rc;
}
