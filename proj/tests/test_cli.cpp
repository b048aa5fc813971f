//
//  test_cli.cpp
//  onsetlab
//
//  End-to-end runs of the command layer on synthetic fixtures, plus golden
//  comparisons of the CSV outputs. Set ONSETLAB_UPDATE_GOLDEN=1 to rewrite
//  the golden files after an intended format change.
//

#include "commands.h"
#include "test_support.h"

#include "onsetlab/annotations.h"
#include "onsetlab/audio_io.h"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>

using namespace onsetlab;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    return read_text_file(p);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

void check_golden(const fs::path& produced, const std::string& golden_name) {
    const fs::path golden = fs::path(ONSETLAB_GOLDEN_DIR) / golden_name;
    if (std::getenv("ONSETLAB_UPDATE_GOLDEN") != nullptr) {
        fs::create_directories(golden.parent_path());
        fs::copy_file(produced, golden, fs::copy_options::overwrite_existing);
    }
    REQUIRE(fs::exists(golden));
    CHECK(slurp(produced) == slurp(golden));
}

const std::string kScore =
    "time,note,stopping,articulation\n"
    "0.5,G3,OpenString,BowStart\n"
    "1,A3,StoppedNote,FingerChange\n"
    "1.5,B3,StoppedNote,BowStart\n"
    "2,C4,StoppedNote,FingerChange\n"
    "2.5,D4,OpenString,BowStart\n"
    "3,E4,StoppedNote,BowStart\n";

/// Synthetic recording with 6 jittered annotators, shared by several tests.
fs::path fixture() {
    static const fs::path dir = [] {
        const auto d = testing_support::scratch_dir("fixture");
        const auto r = run_cli({"synth", "--out", d.string(), "--count", "12", "--ioi", "0.5", "--annotators", "6",
                            "--jitter-sigma", "0.015", "--seed", "42", "--recording", "NR12_VA"});
        REQUIRE(r.code == 0);
        return d;
    }();
    return dir;
}

}  // namespace

TEST_CASE("synth writes audio, truth and annotator files") {
    const auto dir = fixture();
    CHECK(fs::exists(dir / "NR12_VA.wav"));
    const auto truth = parse_annotation(dir / "NR12_VA_truth.txt");
    CHECK(truth.onsets.size() == 12);
    CHECK(truth.onsets.times.front() == 0.5);
    for (int k = 1; k <= 6; ++k) {
        const auto t = parse_annotation(dir / "annotations" / ("NR12_VA_s" + std::to_string(k) + ".txt"));
        CHECK(t.onsets.size() == 12);
        CHECK(t.annotator_id == "s" + std::to_string(k));
    }
    const auto meta = nlohmann::json::parse(slurp(dir / "run_metadata.json"));
    CHECK(meta["command"] == "synth");
    CHECK(meta["seed"] == 42);
    CHECK(meta["outputs"].size() == 8);
}

TEST_CASE("detect finds the clicks and records its parameters") {
    const auto dir = fixture();
    const auto out = testing_support::scratch_dir("detect");
    const auto r = run_cli({"detect", (dir / "NR12_VA.wav").string(), "--detector", "SuF", "--lambda", "1.5", "--out",
                        out.string()});
    REQUIRE(r.code == 0);
    const auto truth = parse_annotation(dir / "NR12_VA_truth.txt").onsets.times;
    const auto found = parse_annotation(out / "NR12_VA.onsets.txt", TrackMetadata{}).onsets.times;
    REQUIRE(found.size() == truth.size());
    // Click peaks land one hop early; allow for the rounding of n / fps.
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(std::abs(found[i] - truth[i]) <= 0.010 + 1e-9);
    }
    CHECK(fs::exists(out / "NR12_VA.activation.txt"));
    const auto meta = nlohmann::json::parse(slurp(out / "run_metadata.json"));
    CHECK(meta["config"]["detector"] == "SuF");
    CHECK(meta["config"]["lambda"] == 1.5);
    REQUIRE(meta["inputs"].size() == 1);
    CHECK(meta["inputs"][0]["sha256"].get<std::string>() == cli::sha256_file(dir / "NR12_VA.wav"));
}

TEST_CASE("detect fits lambda over a grid and reuses activation files") {
    const auto dir = fixture();
    const auto out = testing_support::scratch_dir("detect_grid");
    const auto r = run_cli({"detect", (dir / "NR12_VA.wav").string(), "--detector", "CoF", "--lambda-grid",
                        "0.5:3:0.5", "--reference", dir.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto fit = read_csv(out / "lambda_fit.csv");
    REQUIRE(fit.size() == 7);
    CHECK(fit[1][1] == "1");
    CHECK(r.out.find("fitted lambda 0.5") != std::string::npos);

    // A detect output directory holds activation files next to the onset
    // files; eval reads only the latter.
    const auto scored = testing_support::scratch_dir("detect_grid_eval");
    REQUIRE(run_cli({"eval", out.string(), "--reference", dir.string(), "--out", scored.string()}).code == 0);
    CHECK(read_csv(scored / "scores.csv")[1][0] == "NR12_VA");

    const auto ext = testing_support::scratch_dir("detect_external");
    const auto e = run_cli({"detect", out.string(), "--detector", "external", "--lambda",
                        "0.5", "--out", ext.string()});
    REQUIRE(e.code == 0);
    CHECK(slurp(ext / "NR12_VA.onsets.txt") == slurp(out / "NR12_VA.onsets.txt"));
}

TEST_CASE("missing inputs exit with code 2 and name the path") {
    const auto out = testing_support::scratch_dir("missing");
    auto r = run_cli({"detect", "/no/such/take.wav", "--out", out.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("/no/such/take.wav") != std::string::npos);
    r = run_cli({"eval", "--reference", "/no/such/dir", out.string(), "--out", out.string()});
    CHECK(r.code == 2);

    const std::string cmd = std::string(ONSETLAB_CLI_PATH) + " detect /no/such/take.wav --out " + out.string() +
                            " 2> " + (out / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(slurp(out / "stderr.txt").find("/no/such/take.wav") != std::string::npos);
}

TEST_CASE("eval: identical files score 1, empty estimates score 0") {
    const auto dir = fixture();
    const auto est = testing_support::scratch_dir("eval_est");
    const auto out = testing_support::scratch_dir("eval_out");
    fs::copy_file(dir / "NR12_VA_truth.txt", est / "NR12_VA.onsets.txt");
    write_file_atomic(est / "SP3_VC.onsets.txt", "");
    const auto refs = testing_support::scratch_dir("eval_ref");
    fs::copy_file(dir / "NR12_VA_truth.txt", refs / "NR12_VA_truth.txt");
    write_file_atomic(refs / "SP3_VC_truth.txt", "1.0\n2.0\n");

    const auto r = run_cli({"eval", est.string(), "--reference", refs.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(out / "scores.csv");
    REQUIRE(rows.size() == 6);  // header, 2 recordings, mean, mean_NR, mean_SP
    CHECK(rows[1][0] == "NR12_VA");
    CHECK(rows[1][8] == "1");
    CHECK(rows[1][9] == "1");
    CHECK(rows[1][10] == "1");
    CHECK(rows[2][0] == "SP3_VC");
    CHECK(rows[2][10] == "0");
    CHECK(rows[3][0] == "mean");
    CHECK(rows[3][10] == "0.5");
    CHECK(rows[4][0] == "mean_NR");
    CHECK(rows[5][0] == "mean_SP");

    write_file_atomic(est / "DP1_VN1.onsets.txt", "1.0\n");
    CHECK(run_cli({"eval", est.string(), "--reference", refs.string(), "--out", out.string()}).code == 1);
}

TEST_CASE("agreement matrices are symmetric with a unit diagonal") {
    const auto dir = fixture();
    const auto out = testing_support::scratch_dir("agreement");
    const auto r = run_cli({"agreement", (dir / "annotations").string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(out / "agreement_NR12_VA.csv");
    REQUIRE(rows.size() == 7);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][i + 1] == "1");
        for (std::size_t j = 1; j < rows.size(); ++j) {
            CHECK(rows[i][j + 1] == rows[j][i + 1]);
        }
    }
    CHECK(slurp(out / "agreement_NR12_VA.svg").rfind("<svg", 0) == 0);
    check_golden(out / "agreement_NR12_VA.csv", "agreement_NR12_VA.csv");

    const auto single = testing_support::scratch_dir("agreement_single");
    fs::copy_file(dir / "annotations" / "NR12_VA_s1.txt", single / "NR12_VA_s1.txt");
    CHECK(run_cli({"agreement", single.string(), "--out", out.string()}).code == 1);
}

TEST_CASE("agreement sorts by experience on request") {
    const auto dir = fixture();
    const auto out = testing_support::scratch_dir("agreement_exp");
    write_file_atomic(out / "exp.csv", "annotator_id,experience_years\ns1,9\ns2,1\ns3,5\n");
    const auto r = run_cli({"agreement", (dir / "annotations").string(), "--experience", (out / "exp.csv").string(),
                        "--sort-by-experience", "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(out / "agreement_NR12_VA.csv");
    CHECK(rows[0] == std::vector<std::string>{"annotator_id", "experience_years", "s2", "s3", "s1", "s4", "s5", "s6"});
    CHECK(rows[4][1] == "NA");
}

TEST_CASE("aco: identical annotators keep every onset with zero spread") {
    const auto dir = fixture();
    const auto same = testing_support::scratch_dir("aco_same");
    for (const char* who : {"a1", "a2", "a3"}) {
        fs::copy_file(dir / "NR12_VA_truth.txt", same / (std::string("NR12_VA_") + who + ".txt"));
    }
    const auto out = testing_support::scratch_dir("aco_same_out");
    const auto r = run_cli({"aco", same.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(out / "aco_sweep.csv");
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][2] == "12");
        CHECK(rows[i][4] == "0");
    }
    CHECK(r.out.find("most consistent annotator a1") != std::string::npos);
}

TEST_CASE("aco reruns with a seed are byte-identical and match the golden files") {
    const auto dir = fixture();
    const auto a = testing_support::scratch_dir("aco_a");
    const auto b = testing_support::scratch_dir("aco_b");
    const std::vector<std::string> base = {"aco", (dir / "annotations").string(), "--seed", "7"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string()});
    REQUIRE(run_cli(args).code == 0);
    args = base;
    args.insert(args.end(), {"--out", b.string()});
    REQUIRE(run_cli(args).code == 0);
    for (const char* f : {"aco_sweep.csv", "aco_NR12_VA.csv", "selection.csv", "aco_counts.svg"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
    check_golden(a / "aco_sweep.csv", "aco_sweep.csv");
    check_golden(a / "aco_NR12_VA.csv", "aco_NR12_VA.csv");
    check_golden(a / "selection.csv", "selection.csv");

    // The run metadata alone reproduces the run.
    const auto c = testing_support::scratch_dir("aco_c");
    auto meta = nlohmann::json::parse(slurp(a / "run_metadata.json"));
    meta["config"]["out"] = c.string();
    write_file_atomic(c / "replay.json", meta.dump());
    REQUIRE(run_cli({"--config", (c / "replay.json").string()}).code == 0);
    CHECK(slurp(c / "aco_sweep.csv") == slurp(a / "aco_sweep.csv"));
}

TEST_CASE("onset-types: perfect, missing finger changes, and NA") {
    const auto work = testing_support::scratch_dir("types");
    write_file_atomic(work / "NR12_VA.csv", kScore);
    write_file_atomic(work / "NR12_VA_perfect.txt", "0.5\n1\n1.5\n2\n2.5\n3\n");
    write_file_atomic(work / "NR12_VA_nofc.txt", "0.5\n1.5\n2.5\n3\n");
    const auto out = testing_support::scratch_dir("types_out");
    const auto r = run_cli({"onset-types", (work / "NR12_VA_perfect.txt").string(), (work / "NR12_VA_nofc.txt").string(),
                        "--score", (work / "NR12_VA.csv").string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(out / "onset_types.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[1] == std::vector<std::string>{"NR12_VA", "NR12_VA_perfect", "1", "1", "1", "1"});
    CHECK(rows[2] == std::vector<std::string>{"NR12_VA", "NR12_VA_nofc", "1", "0.5", "1", "0"});
    CHECK(rows[3][1] == "mean");
    CHECK(rows[4] == std::vector<std::string>{"NR12_VA", "count", "2", "4", "4", "2"});
    check_golden(out / "onset_types.csv", "onset_types.csv");

    write_file_atomic(work / "stopped.csv", "time,note,stopping,articulation\n1,A3,StoppedNote,BowStart\n");
    const auto na = run_cli({"onset-types", (work / "NR12_VA_perfect.txt").string(), "--score",
                         (work / "stopped.csv").string(), "--out", out.string()});
    REQUIRE(na.code == 0);
    CHECK(read_csv(out / "onset_types.csv")[1][2] == "NA");
}

TEST_CASE("configs: unknown keys and bad values are rejected") {
    const auto out = testing_support::scratch_dir("config");
    write_file_atomic(out / "bad.json", R"({"omega": 0.05, "omegga": 1})");
    auto r = run_cli({"aco", "--config", (out / "bad.json").string(), out.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("omegga") != std::string::npos);

    write_file_atomic(out / "typed.json", R"({"omega": "wide"})");
    CHECK(run_cli({"aco", "--config", (out / "typed.json").string()}).code == 1);
    CHECK(run_cli({"aco", out.string(), "--omega", "-1"}).code == 1);
    CHECK(run_cli({"detect", out.string(), "--detector", "XYZ"}).code == 1);
    CHECK(run_cli({"detect", out.string(), "--lambda-grid", "1:2"}).code == 1);
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({"--config", (out / "nowhere.json").string()}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("run config survives a JSON round trip") {
    cli::RunConfig cfg;
    cfg.command = "aco";
    cfg.inputs = {"a", "b"};
    cfg.omegas = {0.01, 0.02};
    cfg.seed = 18446744073709551615ull;
    cfg.sort_by_experience = true;
    const auto back = cli::RunConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.seed == cfg.seed);
}
