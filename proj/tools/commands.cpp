//
//  commands.cpp
//  onsetlab
//

#include "commands.h"
#include "fields.h"
#include "svg.h"

#include "onsetlab/annotations.h"
#include "onsetlab/audio_io.h"
#include "onsetlab/consistency.h"
#include "onsetlab/detectors.h"
#include "onsetlab/evaluation.h"
#include "onsetlab/peakpick.h"
#include "onsetlab/rng.h"
#include "onsetlab/synth.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

namespace onsetlab::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::array<const char*, 4> kCategoryColumns = {"open_string", "stopped_note", "bow_start",
                                                         "finger_change"};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        row += (i ? "," : "") + csv_field(fields[i]);
    }
    return row + "\n";
}

std::string dec(double v) {
    return format_decimal(v);
}

std::string rate_or_na(const std::optional<double>& v) {
    return v ? dec(*v) : "NA";
}

/// Output bookkeeping shared by all commands.
class Run {
public:
    Run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
        : cfg(cfg), out(out), err(err), dir_(cfg.out) {
        fs::create_directories(dir_);
    }

    const RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;

    fs::path require_file(const fs::path& p) {
        if (!fs::is_regular_file(p)) {
            throw MissingInput(p);
        }
        if (std::find(inputs_.begin(), inputs_.end(), p) == inputs_.end()) {
            inputs_.push_back(p);
        }
        return p;
    }

    void write(const std::string& name, const std::string& contents) {
        const fs::path p = dir_ / name;
        fs::create_directories(p.parent_path());
        write_file_atomic(p, contents);
        record(name);
    }

    /// Lists a file written by other means in the run metadata.
    void record(const std::string& name) { outputs_.push_back(name); }

    void warn(const std::string& where, const Diagnostics& diag) {
        for (const auto& w : diag.warnings) {
            err << "warning: " << where << ": " << w << "\n";
        }
    }

    void finish(const std::vector<fs::path>& extra_inputs) {
        nlohmann::ordered_json meta;
        meta["tool"] = "onsetlab";
        meta["version"] = kToolVersion;
        meta["command"] = cfg.command;
        meta["seed"] = cfg.seed;
        meta["config"] = cfg.to_json();
        auto inputs = nlohmann::ordered_json::array();
        for (const auto& p : extra_inputs) {
            if (std::find(inputs_.begin(), inputs_.end(), p) == inputs_.end()) {
                inputs_.push_back(p);
            }
        }
        for (const auto& p : inputs_) {
            inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
        }
        meta["inputs"] = inputs;
        std::sort(outputs_.begin(), outputs_.end());
        meta["outputs"] = outputs_;
        meta["csv_schemas"] = csv_schemas();
        write_file_atomic(dir_ / "run_metadata.json", meta.dump(2) + "\n");
    }

private:
    fs::path dir_;
    std::vector<fs::path> inputs_;
    std::vector<std::string> outputs_;
};

/// Files named directly, plus the sorted `ext` files of named directories.
bool ends_with(const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

// What a directory scan picks up. Activation files share the .txt
// extension with onset files, so each side skips the other.
enum class Scan { Plain, Onsets, Activations };

bool wanted(const fs::path& p, const std::string& ext, Scan scan) {
    if (p.extension() != ext) {
        return false;
    }
    const bool activation = ends_with(p.filename().string(), ".activation.txt");
    switch (scan) {
        case Scan::Onsets:
            return !activation;
        case Scan::Activations:
            return activation;
        case Scan::Plain:
            break;
    }
    return true;
}

/// Files named directly are taken as given; directories are scanned
/// (non-recursively) for matching files in name order.
std::vector<fs::path> expand(const std::vector<std::string>& inputs, const std::string& ext,
                             Scan scan = Scan::Plain) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p)) {
                if (e.is_regular_file() && wanted(e.path(), ext, scan)) {
                    found.push_back(e.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::exists(p)) {
            files.push_back(p);
        } else {
            throw MissingInput(p);
        }
    }
    return files;
}

/// File name without extension and without an .onsets/.activation tag.
std::string pair_key(const fs::path& p) {
    std::string stem = p.stem().string();
    for (const char* tag : {".onsets", ".activation"}) {
        const std::string t(tag);
        if (stem.size() > t.size() && stem.compare(stem.size() - t.size(), t.size(), t) == 0) {
            stem.resize(stem.size() - t.size());
        }
    }
    return stem;
}

std::optional<RecordingKey> recording_of(const std::string& key) {
    if (auto m = metadata_from_filename(key)) {
        return m->recording;
    }
    if (auto m = metadata_from_filename(key + "_x")) {
        return m->recording;
    }
    return std::nullopt;
}

/// References by file key, falling back to the recording id when exactly
/// one reference names that recording.
class ReferenceIndex {
public:
    explicit ReferenceIndex(const std::vector<fs::path>& files) {
        std::map<std::string, int> per_recording;
        for (const auto& f : files) {
            by_key_[pair_key(f)] = f;
            if (auto r = recording_of(pair_key(f))) {
                ++per_recording[r->to_string()];
                by_recording_[r->to_string()] = f;
            }
        }
        for (const auto& [rec, n] : per_recording) {
            if (n > 1) {
                by_recording_.erase(rec);
            }
        }
    }

    std::optional<fs::path> find(const std::string& key) const {
        if (auto it = by_key_.find(key); it != by_key_.end()) {
            return it->second;
        }
        if (auto r = recording_of(key)) {
            if (auto it = by_recording_.find(r->to_string()); it != by_recording_.end()) {
                return it->second;
            }
        }
        return std::nullopt;
    }

private:
    std::map<std::string, fs::path> by_key_;
    std::map<std::string, fs::path> by_recording_;
};

AnnotationTrack load_track(Run& run, const fs::path& path, bool preprocess) {
    run.require_file(path);
    TrackMetadata meta;
    if (auto m = metadata_from_filename(path.filename().string())) {
        meta = *m;
    } else {
        meta.annotator_id = pair_key(path);
    }
    Diagnostics diag;
    auto track = parse_annotation(path, meta, &diag);
    run.warn(path.string(), diag);
    if (preprocess && run.cfg.min_ioi > 0.0) {
        const auto before = track.onsets.size();
        track = dedup_short_ioi(track, run.cfg.min_ioi);
        if (track.onsets.size() != before) {
            run.err << "note: " << path.string() << ": removed " << before - track.onsets.size()
                    << " onsets closer than " << dec(run.cfg.min_ioi) << " s\n";
        }
    }
    return track;
}

std::string onset_text(const std::vector<double>& times) {
    std::string s;
    for (double t : times) {
        s += dec(t) + "\n";
    }
    return s;
}

/// Annotation tracks grouped by recording id (from their file names).
std::map<std::string, std::vector<AnnotationTrack>> load_groups(Run& run) {
    const auto files = expand(run.cfg.inputs, ".txt", Scan::Onsets);
    if (files.empty()) {
        throw Error(run.cfg.command + ": no annotation files given");
    }
    std::map<std::string, double> experience;
    if (!run.cfg.experience.empty()) {
        experience = load_experience(run.require_file(run.cfg.experience));
    }
    std::map<std::string, std::vector<AnnotationTrack>> groups;
    for (const auto& f : files) {
        if (!metadata_from_filename(f.filename().string())) {
            throw Error(run.cfg.command + ": cannot derive recording and annotator from file name " + f.string());
        }
        auto track = load_track(run, f, true);
        if (auto it = experience.find(track.annotator_id); it != experience.end()) {
            track.experience_years = it->second;
        }
        groups[track.recording_id()].push_back(std::move(track));
    }
    for (const auto& [rec, tracks] : groups) {
        if (tracks.size() < 2) {
            throw Error(run.cfg.command + ": recording " + rec + " has fewer than 2 annotators");
        }
    }
    return groups;
}

// ---------------------------------------------------------------------------

void cmd_detect(Run& run) {
    const auto& cfg = run.cfg;
    const DetectorId id = detector_from_string(cfg.detector);
    DetectorSettings settings;
    settings.spectral = spectral_config(cfg);
    settings.flux = {cfg.max_width, cfg.mu};

    std::vector<std::pair<std::string, fs::path>> recordings;
    if (!cfg.manifest.empty()) {
        const auto index = load_manifest(run.require_file(cfg.manifest));
        for (const auto& line : index.report) {
            run.err << "warning: " << cfg.manifest << ": " << line << "\n";
        }
        for (const auto& [key, entry] : index.entries) {
            recordings.emplace_back(entry.recording_id, entry.wav_path);
        }
    }
    const bool external = id == DetectorId::External;
    for (const auto& f : expand(cfg.inputs, external ? ".txt" : ".wav", external ? Scan::Activations : Scan::Plain)) {
        recordings.emplace_back(pair_key(f), f);
    }
    if (recordings.empty()) {
        throw Error("detect: no input recordings");
    }

    std::vector<DetectionFunction> dfs;
    for (const auto& [rec, path] : recordings) {
        run.require_file(path);
        if (id == DetectorId::External) {
            dfs.push_back(load_activation(path));
            continue;
        }
        Diagnostics diag;
        dfs.push_back(compute_detection_function(load_audio(path), id, settings, &diag));
        run.warn(path.string(), diag);
        run.write(rec + ".activation.txt", format_activation(dfs.back()));
    }

    double lambda = cfg.lambda;
    if (!cfg.lambda_grid.empty()) {
        if (cfg.reference.empty()) {
            throw Error("detect: --lambda-grid needs --reference annotations to fit against");
        }
        const ReferenceIndex refs(expand({cfg.reference}, ".txt", Scan::Onsets));
        std::vector<AnnotationTrack> tracks;
        for (const auto& [rec, path] : recordings) {
            const auto ref = refs.find(rec);
            if (!ref) {
                throw Error("detect: no reference annotation for " + rec);
            }
            tracks.push_back(load_track(run, *ref, true));
        }
        const auto fit = fit_lambda(dfs, tracks, parse_lambda_grid(cfg.lambda_grid), MatchConfig{cfg.omega},
                                    PeakPickConfig{1.0, cfg.min_separation});
        std::string csv = csv_row({"lambda", "mean_f"});
        for (std::size_t i = 0; i < fit.grid.size(); ++i) {
            csv += csv_row({dec(fit.grid[i]), dec(fit.mean_f_per_lambda[i])});
        }
        run.write("lambda_fit.csv", csv);
        lambda = fit.lambda;
        run.out << "fitted lambda " << dec(lambda) << " (mean F " << dec(fit.mean_f) << ")\n";
    }

    std::string summary = csv_row({"recording_id", "detector", "fps", "num_frames", "num_onsets", "lambda"});
    for (std::size_t i = 0; i < recordings.size(); ++i) {
        const auto onsets = pick_peaks(dfs[i], {lambda, cfg.min_separation});
        run.write(recordings[i].first + ".onsets.txt", onset_text(onsets.times));
        summary += csv_row({recordings[i].first, to_string(id), dec(dfs[i].fps), std::to_string(dfs[i].size()),
                            std::to_string(onsets.size()), dec(lambda)});
    }
    run.write("detect.csv", summary);
    run.out << "detected onsets in " << recordings.size() << " recording(s)\n";
}

void cmd_eval(Run& run) {
    const auto& cfg = run.cfg;
    if (cfg.reference.empty()) {
        throw Error("eval: --reference is required");
    }
    const ReferenceIndex refs(expand({cfg.reference}, ".txt", Scan::Onsets));
    const auto estimates = expand(cfg.inputs, ".txt", Scan::Onsets);
    if (estimates.empty()) {
        throw Error("eval: no estimate files given");
    }

    struct Row {
        std::string key;
        std::optional<RecordingKey> rec;
        std::size_t nref, nest, tp, fp, fn;
        Scores s;
    };
    std::vector<Row> rows;
    for (const auto& est_path : estimates) {
        const std::string key = pair_key(est_path);
        const auto ref_path = refs.find(key);
        if (!ref_path) {
            throw Error("eval: no reference pairs with " + est_path.string());
        }
        const auto ref = load_track(run, *ref_path, true);
        const auto est = load_track(run, est_path, false);
        const auto m = match_onsets(ref.onsets, est.onsets, MatchConfig{cfg.omega});
        rows.push_back({key, recording_of(key), ref.onsets.size(), est.onsets.size(), m.tp(), m.fp.size(),
                        m.fn.size(), score(m)});
    }

    std::string csv = csv_row({"recording_id", "condition", "instrument", "n_ref", "n_est", "tp", "fp", "fn",
                               "precision", "recall", "f_measure"});
    auto emit_mean = [&](const std::string& label, const std::string& cond, const std::vector<const Row*>& group) {
        std::size_t nref = 0, nest = 0, tp = 0, fp = 0, fn = 0;
        double p = 0, r = 0, f = 0;
        for (const auto* row : group) {
            nref += row->nref;
            nest += row->nest;
            tp += row->tp;
            fp += row->fp;
            fn += row->fn;
            p += row->s.precision;
            r += row->s.recall;
            f += row->s.f_measure;
        }
        const double n = static_cast<double>(group.size());
        csv += csv_row({label, cond, "", std::to_string(nref), std::to_string(nest), std::to_string(tp),
                        std::to_string(fp), std::to_string(fn), dec(p / n), dec(r / n), dec(f / n)});
    };
    std::vector<const Row*> all;
    std::map<Condition, std::vector<const Row*>> by_condition;
    for (const auto& row : rows) {
        csv += csv_row({row.key, row.rec ? to_string(row.rec->condition) : "",
                        row.rec ? to_string(row.rec->instrument) : "", std::to_string(row.nref),
                        std::to_string(row.nest), std::to_string(row.tp), std::to_string(row.fp),
                        std::to_string(row.fn), dec(row.s.precision), dec(row.s.recall), dec(row.s.f_measure)});
        all.push_back(&row);
        if (row.rec) {
            by_condition[row.rec->condition].push_back(&row);
        }
    }
    emit_mean("mean", "", all);
    for (const auto& [cond, group] : by_condition) {
        emit_mean("mean_" + to_string(cond), to_string(cond), group);
    }
    run.write("scores.csv", csv);
    run.out << "evaluated " << rows.size() << " pair(s)\n";
}

void cmd_agreement(Run& run) {
    for (const auto& [rec, tracks] : load_groups(run)) {
        const auto am = agreement_matrix(tracks, MatchConfig{run.cfg.omega}, run.cfg.sort_by_experience);
        std::vector<std::string> header = {"annotator_id", "experience_years"};
        header.insert(header.end(), am.annotator_ids.begin(), am.annotator_ids.end());
        std::string csv = csv_row(header);
        for (std::size_t i = 0; i < am.annotator_ids.size(); ++i) {
            std::vector<std::string> row = {am.annotator_ids[i],
                                            am.experience_years[i] ? dec(*am.experience_years[i]) : "NA"};
            for (std::size_t j = 0; j < am.annotator_ids.size(); ++j) {
                row.push_back(dec(am.f_measure(i, j)));
            }
            csv += csv_row(row);
        }
        run.write("agreement_" + rec + ".csv", csv);
        run.write("agreement_" + rec + ".svg",
                  svg::heatmap("Pairwise F-measure, " + rec, am.annotator_ids, am.f_measure));
        run.out << rec << ": " << am.annotator_ids.size() << "x" << am.annotator_ids.size() << " matrix\n";
    }
}

void cmd_aco(Run& run) {
    const auto& cfg = run.cfg;
    AcoConfig aco_cfg;
    aco_cfg.omega = cfg.omega;
    aco_cfg.max_repetitions = cfg.max_repetitions;
    aco_cfg.min_repetitions = cfg.min_repetitions;
    aco_cfg.convergence_eps = cfg.convergence_eps;
    aco_cfg.rng_seed = cfg.seed;

    std::string sweep_csv = csv_row({"recording_id", "omega", "count", "mean_count", "mean_timing_difference",
                                     "repetitions_used", "converged"});
    std::string selection_csv = csv_row({"recording_id", "rank", "annotator_id", "matched", "mean_deviation"});
    std::vector<svg::Series> counts, timing;
    for (const auto& [rec, tracks] : load_groups(run)) {
        const auto sweep = aco_sweep(tracks, cfg.omegas, aco_cfg);
        svg::Series c{rec, {}, {}}, t{rec, {}, {}};
        for (const auto& p : sweep) {
            sweep_csv += csv_row({rec, dec(p.omega), std::to_string(p.count), dec(p.mean_count),
                                  dec(p.mean_timing_difference), std::to_string(p.repetitions_used),
                                  p.converged ? "true" : "false"});
            c.x.push_back(p.omega * 1000.0);
            c.y.push_back(static_cast<double>(p.count));
            t.x.push_back(p.omega * 1000.0);
            t.y.push_back(p.mean_timing_difference * 1000.0);
        }
        counts.push_back(std::move(c));
        timing.push_back(std::move(t));

        const auto aco = compute_aco(tracks, aco_cfg);
        std::string aco_csv = csv_row({"aco_time", "spread", "n_contributors"});
        for (std::size_t k = 0; k < aco.count; ++k) {
            aco_csv += csv_row({dec(aco.aco_times[k]), dec(aco.per_onset_spread[k]), dec(aco.n_contributors[k])});
        }
        run.write("aco_" + rec + ".csv", aco_csv);
        if (!aco.converged) {
            run.err << "warning: " << rec << ": ACO did not converge in " << aco.repetitions_used
                    << " repetitions\n";
        }
        if (aco.count == 0) {
            run.err << "warning: " << rec << ": no consistent onsets at omega " << dec(cfg.omega)
                    << "; no annotator selected\n";
            continue;
        }
        const auto sel = select_most_consistent(tracks, aco, cfg.omega);
        for (std::size_t r = 0; r < sel.ranking.size(); ++r) {
            const auto& a = sel.ranking[r];
            selection_csv += csv_row({rec, std::to_string(r + 1), a.annotator_id, std::to_string(a.matched),
                                      dec(a.mean_deviation)});
        }
        run.out << rec << ": " << aco.count << " ACOs at omega " << dec(cfg.omega)
                << "; most consistent annotator " << sel.best.annotator_id << " (" << sel.best.matched
                << " matched, mean deviation " << dec(sel.best.mean_deviation) << " s)\n";
    }
    run.write("aco_sweep.csv", sweep_csv);
    run.write("selection.csv", selection_csv);
    run.write("aco_counts.svg", svg::line_chart("Average consistent onsets", "tolerance (ms)", "ACO count", counts));
    run.write("aco_timing.svg",
              svg::line_chart("Mean timing difference", "tolerance (ms)", "difference (ms)", timing));
}

void cmd_onset_types(Run& run) {
    const auto& cfg = run.cfg;
    if (cfg.score.empty()) {
        throw Error("onset-types: --score is required");
    }
    std::map<std::string, std::vector<ScoredNote>> scores;
    for (const auto& f : expand(cfg.score, ".csv")) {
        const std::string key = pair_key(f);
        const auto rec = recording_of(key);
        scores[rec ? rec->to_string() : key] = load_score_annotations(run.require_file(f));
    }
    if (scores.empty()) {
        throw Error("onset-types: no score files found");
    }
    const auto files = expand(cfg.inputs, ".txt", Scan::Onsets);
    if (files.empty()) {
        throw Error("onset-types: no annotation or estimate files given");
    }

    std::map<std::string, std::vector<std::pair<std::string, StratifiedRates>>> results;
    for (const auto& f : files) {
        const std::string key = pair_key(f);
        const auto rec = recording_of(key);
        std::string target;
        if (rec && scores.count(rec->to_string())) {
            target = rec->to_string();
        } else if (scores.size() == 1) {
            target = scores.begin()->first;
        } else {
            throw Error("onset-types: no score file pairs with " + f.string());
        }
        const auto track = load_track(run, f, true);
        results[target].emplace_back(key, stratified_tp_rate(scores[target], track.onsets.times,
                                                             MatchConfig{cfg.omega}));
    }

    std::vector<std::string> header = {"recording_id", "source_id"};
    header.insert(header.end(), kCategoryColumns.begin(), kCategoryColumns.end());
    std::string csv = csv_row(header);
    std::vector<svg::RadarSeries> radar;
    for (const auto& [rec, rows] : results) {
        std::array<double, 4> sum{};
        std::array<int, 4> n{};
        for (const auto& [source, rates] : rows) {
            std::vector<std::string> row = {rec, source};
            for (auto c : kOnsetCategories) {
                const auto r = rates.rate(c);
                row.push_back(rate_or_na(r));
                if (r) {
                    sum[static_cast<std::size_t>(c)] += *r;
                    ++n[static_cast<std::size_t>(c)];
                }
            }
            csv += csv_row(row);
        }
        std::vector<std::string> mean_row = {rec, "mean"};
        std::vector<std::string> count_row = {rec, "count"};
        svg::RadarSeries series{rec, {}};
        const auto counts = count_categories(scores[rec]);
        for (std::size_t c = 0; c < 4; ++c) {
            std::optional<double> m;
            if (n[c] > 0) {
                m = sum[c] / n[c];
            }
            mean_row.push_back(rate_or_na(m));
            count_row.push_back(std::to_string(counts.per_category[c]));
            series.values.push_back(m);
        }
        csv += csv_row(mean_row);
        csv += csv_row(count_row);
        radar.push_back(std::move(series));
    }
    run.write("onset_types.csv", csv);
    run.write("onset_types.svg", svg::radar("Mean true positive rate by onset type",
                                            {"open string", "stopped note", "bow start", "finger change"}, radar));
    run.out << "scored " << files.size() << " file(s) against " << results.size() << " score(s)\n";
}

void cmd_synth(Run& run) {
    const auto& cfg = run.cfg;
    SynthSpec spec;
    spec.onset_times = cfg.onsets;
    if (spec.onset_times.empty()) {
        for (int k = 0; k < cfg.count; ++k) {
            spec.onset_times.push_back(0.5 + cfg.ioi * k);
        }
    }
    spec.tone = cfg.tone == "sine" ? ToneType::Sine : cfg.tone == "sawtooth" ? ToneType::Sawtooth : ToneType::Click;
    spec.f0 = cfg.f0;
    spec.amplitude = cfg.amplitude;
    spec.attack = cfg.attack;
    spec.vibrato_depth = cfg.vibrato_depth;
    spec.vibrato_rate = cfg.vibrato_rate;
    spec.tremolo_depth = cfg.tremolo_depth;
    spec.tremolo_rate = cfg.tremolo_rate;
    spec.duration = cfg.duration;
    spec.noise_level = cfg.noise_level;
    spec.rng_seed = cfg.seed;

    auto audio = render_audio(spec, cfg.sample_rate);
    audio.source_id = cfg.recording;
    write_wav(fs::path(cfg.out) / (cfg.recording + ".wav"), audio);
    run.record(cfg.recording + ".wav");

    const RecordingKey key = *recording_of(cfg.recording);
    AnnotationTrack truth;
    truth.annotator_id = "truth";
    truth.condition = key.condition;
    truth.take = key.take;
    truth.instrument = key.instrument;
    truth.onsets.times = spec.onset_times;
    run.write(cfg.recording + "_truth.txt", format_annotation(truth));

    Rng seeds(cfg.seed);
    for (int k = 1; k <= cfg.annotators; ++k) {
        AnnotatorModel model;
        model.jitter_sigma = cfg.jitter_sigma;
        model.miss_rate = cfg.miss_rate;
        model.false_rate = cfg.false_rate;
        model.rng_seed = seeds.next();
        model.annotator_id = "s" + std::to_string(k);
        auto track = simulate_annotator(truth.onsets, model);
        track.condition = key.condition;
        track.take = key.take;
        track.instrument = key.instrument;
        run.write("annotations/" + cfg.recording + "_" + model.annotator_id + ".txt", format_annotation(track));
    }
    run.out << "rendered " << spec.onset_times.size() << " onset(s), " << cfg.annotators
            << " simulated annotator(s)\n";
}

}  // namespace

void execute(const RunConfig& cfg, std::ostream& out, std::ostream& err,
             const std::vector<fs::path>& extra_inputs) {
    cfg.validate();
    Run run(cfg, out, err);
    if (cfg.command == "detect") {
        cmd_detect(run);
    } else if (cfg.command == "eval") {
        cmd_eval(run);
    } else if (cfg.command == "agreement") {
        cmd_agreement(run);
    } else if (cfg.command == "aco") {
        cmd_aco(run);
    } else if (cfg.command == "onset-types") {
        cmd_onset_types(run);
    } else {
        cmd_synth(run);
    }
    run.finish(extra_inputs);
}

}  // namespace onsetlab::cli
