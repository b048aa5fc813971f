//
//  annotations.cpp
//  onsetlab
//

#include "onsetlab/annotations.h"

#include "onsetlab/audio_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace onsetlab {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> read_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

void expect_header(const std::vector<std::string>& lines, const std::vector<std::string>& header,
                   const std::string& source) {
    if (lines.empty()) {
        throw ParseError(source, 1, "missing header row");
    }
    auto fields = split_csv_line(lines.front());
    for (auto& f : fields) {
        f = lower(trim(f));
    }
    if (fields != header) {
        std::string expected;
        for (const auto& h : header) {
            expected += (expected.empty() ? "" : ",") + h;
        }
        throw ParseError(source, 1, "expected header '" + expected + "'");
    }
}

}  // namespace

std::string to_string(Instrument instrument) {
    switch (instrument) {
    case Instrument::VN1:
        return "VN1";
    case Instrument::VN2:
        return "VN2";
    case Instrument::VA:
        return "VA";
    case Instrument::VC:
        return "VC";
    }
    return "VA";
}

std::string to_string(Condition condition) {
    switch (condition) {
    case Condition::NR:
        return "NR";
    case Condition::SP:
        return "SP";
    case Condition::DP:
        return "DP";
    }
    return "NR";
}

std::optional<Instrument> instrument_from_string(const std::string& text) {
    for (auto i : {Instrument::VN1, Instrument::VN2, Instrument::VA, Instrument::VC}) {
        if (text == to_string(i)) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<Condition> condition_from_string(const std::string& text) {
    for (auto c : {Condition::NR, Condition::SP, Condition::DP}) {
        if (text == to_string(c)) {
            return c;
        }
    }
    return std::nullopt;
}

std::string RecordingKey::to_string() const {
    return onsetlab::to_string(condition) + std::to_string(take) + "_" +
           onsetlab::to_string(instrument);
}

void validate_track(const AnnotationTrack& track) {
    if (track.take < 1 || track.take > 12) {
        throw Error("annotation track " + track.annotator_id + ": take must be in 1..12");
    }
    if (track.experience_years && *track.experience_years < 0.0) {
        throw Error("annotation track " + track.annotator_id + ": negative experience");
    }
    if (!track.labels.empty() && track.labels.size() != track.onsets.size()) {
        throw Error("annotation track " + track.annotator_id + ": label count mismatch");
    }
    validate_onset_times(track.onsets.times, "annotation track " + track.annotator_id);
}

std::optional<TrackMetadata> metadata_from_filename(const std::string& filename) {
    static const std::regex pattern(R"(^(NR|SP|DP)(\d{1,2})_(VN1|VN2|VA|VC)_([A-Za-z0-9]+)(\.txt)?$)");
    std::smatch m;
    if (!std::regex_match(filename, m, pattern)) {
        return std::nullopt;
    }
    TrackMetadata meta;
    meta.recording.condition = *condition_from_string(m[1].str());
    meta.recording.take = std::stoi(m[2].str());
    meta.recording.instrument = *instrument_from_string(m[3].str());
    meta.annotator_id = m[4].str();
    if (meta.recording.take < 1 || meta.recording.take > 12) {
        return std::nullopt;
    }
    return meta;
}

AnnotationTrack parse_annotation_text(const std::string& text, const std::string& source,
                                      const TrackMetadata& metadata, Diagnostics* diag) {
    struct Entry {
        double time;
        std::string label;
    };
    std::vector<Entry> entries;
    const auto lines = read_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (trim(line).empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        const std::string time_text = tab == std::string::npos ? line : line.substr(0, tab);
        double t = 0.0;
        if (!parse_decimal(time_text, t) || !std::isfinite(t)) {
            throw ParseError(source, i + 1, "non-numeric time '" + time_text + "'");
        }
        if (t < 0.0) {
            throw ParseError(source, i + 1, "negative time");
        }
        entries.push_back({t, tab == std::string::npos ? std::string() : line.substr(tab + 1)});
    }

    const bool sorted = std::is_sorted(entries.begin(), entries.end(),
                                       [](const Entry& a, const Entry& b) { return a.time < b.time; });
    if (!sorted) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const Entry& a, const Entry& b) { return a.time < b.time; });
        if (diag != nullptr) {
            diag->warn(source + ": onsets were not in time order; sorted");
        }
    }

    AnnotationTrack track;
    track.annotator_id = metadata.annotator_id;
    track.condition = metadata.recording.condition;
    track.take = metadata.recording.take;
    track.instrument = metadata.recording.instrument;
    track.onsets.source_id = metadata.recording.to_string();
    const bool any_label = std::any_of(entries.begin(), entries.end(),
                                       [](const Entry& e) { return !e.label.empty(); });
    for (const auto& e : entries) {
        if (!track.onsets.times.empty() && e.time == track.onsets.times.back()) {
            if (diag != nullptr) {
                diag->warn(source + ": duplicate onset " + format_decimal(e.time) + " dropped");
            }
            continue;
        }
        track.onsets.times.push_back(e.time);
        if (any_label) {
            track.labels.push_back(e.label);
        }
    }
    validate_track(track);
    return track;
}

AnnotationTrack parse_annotation(const std::filesystem::path& path,
                                 const std::optional<TrackMetadata>& metadata, Diagnostics* diag) {
    std::optional<TrackMetadata> meta = metadata;
    if (!meta) {
        meta = metadata_from_filename(path.filename().string());
        if (!meta) {
            throw ParseError(path.string(), 0,
                             "file name does not match <condition><take>_<instrument>_<annotator>.txt "
                             "and no metadata was supplied");
        }
    }
    return parse_annotation_text(read_text_file(path), path.string(), *meta, diag);
}

std::string format_annotation(const AnnotationTrack& track) {
    std::string out;
    for (std::size_t i = 0; i < track.onsets.times.size(); ++i) {
        out += format_decimal(track.onsets.times[i]);
        if (i < track.labels.size() && !track.labels[i].empty()) {
            out += '\t';
            out += track.labels[i];
        }
        out += '\n';
    }
    return out;
}

void write_annotation(const std::filesystem::path& path, const AnnotationTrack& track) {
    write_file_atomic(path, format_annotation(track));
}

std::vector<double> dedup_short_ioi(const std::vector<double>& times, double min_ioi) {
    std::vector<double> kept;
    kept.reserve(times.size());
    for (double t : times) {
        if (kept.empty() || t - kept.back() >= min_ioi) {
            kept.push_back(t);
        }
    }
    return kept;
}

AnnotationTrack dedup_short_ioi(const AnnotationTrack& track, double min_ioi) {
    AnnotationTrack out = track;
    out.onsets.times.clear();
    out.labels.clear();
    const auto& times = track.onsets.times;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (out.onsets.times.empty() || times[i] - out.onsets.times.back() >= min_ioi) {
            out.onsets.times.push_back(times[i]);
            if (!track.labels.empty()) {
                out.labels.push_back(track.labels[i]);
            }
        }
    }
    return out;
}

std::map<std::string, double> load_experience(const std::filesystem::path& path) {
    const auto lines = read_lines(read_text_file(path));
    expect_header(lines, {"annotator_id", "experience_years"}, path.string());
    std::map<std::string, double> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) {
            continue;
        }
        const auto fields = split_csv_line(lines[i]);
        double years = 0.0;
        if (fields.size() != 2 || !parse_decimal(fields[1], years) || years < 0.0) {
            throw ParseError(path.string(), i + 1, "expected '<annotator_id>,<years >= 0>'");
        }
        out[trim(fields[0])] = years;
    }
    return out;
}

std::string to_string(OnsetCategory category) {
    switch (category) {
    case OnsetCategory::OpenString:
        return "OpenString";
    case OnsetCategory::StoppedNote:
        return "StoppedNote";
    case OnsetCategory::BowStart:
        return "BowStart";
    case OnsetCategory::FingerChange:
        return "FingerChange";
    }
    return "OpenString";
}

bool in_category(const OnsetTypeLabel& label, OnsetCategory category) {
    switch (category) {
    case OnsetCategory::OpenString:
        return label.stopping == Stopping::OpenString;
    case OnsetCategory::StoppedNote:
        return label.stopping == Stopping::StoppedNote;
    case OnsetCategory::BowStart:
        return label.articulation == Articulation::BowStart;
    case OnsetCategory::FingerChange:
        return label.articulation == Articulation::FingerChange;
    }
    return false;
}

std::vector<ScoredNote> parse_score_csv(const std::string& text, const std::string& source) {
    const auto lines = read_lines(text);
    std::vector<ScoredNote> notes;
    if (lines.empty() || (lines.size() == 1 && trim(lines[0]).empty())) {
        return notes;
    }
    expect_header(lines, {"time", "note", "stopping", "articulation"}, source);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) {
            continue;
        }
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 4) {
            throw ParseError(source, i + 1, "expected 4 fields");
        }
        ScoredNote note;
        if (!parse_decimal(fields[0], note.time) || !std::isfinite(note.time) || note.time < 0.0) {
            throw ParseError(source, i + 1, "invalid time '" + fields[0] + "'");
        }
        note.note_name = trim(fields[1]);
        const std::string stopping = lower(trim(fields[2]));
        const std::string articulation = lower(trim(fields[3]));
        if (stopping == "openstring") {
            note.label.stopping = Stopping::OpenString;
        } else if (stopping == "stoppednote") {
            note.label.stopping = Stopping::StoppedNote;
        } else {
            throw ParseError(source, i + 1, "unknown stopping category '" + fields[2] + "'");
        }
        if (articulation == "bowstart") {
            note.label.articulation = Articulation::BowStart;
        } else if (articulation == "fingerchange") {
            note.label.articulation = Articulation::FingerChange;
        } else {
            throw ParseError(source, i + 1, "unknown articulation category '" + fields[3] + "'");
        }
        if (!notes.empty() && !(note.time > notes.back().time)) {
            throw ParseError(source, i + 1, "note times must be strictly increasing");
        }
        notes.push_back(std::move(note));
    }
    return notes;
}

std::vector<ScoredNote> load_score_annotations(const std::filesystem::path& path) {
    return parse_score_csv(read_text_file(path), path.string());
}

CategoryCounts count_categories(const std::vector<ScoredNote>& notes) {
    CategoryCounts counts;
    counts.total = notes.size();
    for (const auto& note : notes) {
        for (auto c : kOnsetCategories) {
            if (in_category(note.label, c)) {
                ++counts.per_category[static_cast<std::size_t>(c)];
            }
        }
    }
    return counts;
}

const ManifestEntry* DatasetIndex::find(const RecordingKey& key) const {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
}

std::size_t DatasetIndex::count(Condition condition) const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const auto& kv) {
        return kv.first.condition == condition;
    }));
}

DatasetIndex parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                            const std::string& source) {
    const auto lines = read_lines(text);
    expect_header(lines, {"recording_id", "wav_path", "instrument", "condition", "take"}, source);
    DatasetIndex index;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) {
            continue;
        }
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 5) {
            throw ParseError(source, i + 1, "expected 5 fields");
        }
        ManifestEntry entry;
        entry.recording_id = trim(fields[0]);
        const auto instrument = instrument_from_string(trim(fields[2]));
        const auto condition = condition_from_string(trim(fields[3]));
        double take = 0.0;
        if (!instrument) {
            throw ParseError(source, i + 1, "unknown instrument '" + fields[2] + "'");
        }
        if (!condition) {
            throw ParseError(source, i + 1, "unknown condition '" + fields[3] + "'");
        }
        if (!parse_decimal(fields[4], take) || take != std::floor(take) || take < 1 || take > 12) {
            throw ParseError(source, i + 1, "take must be an integer in 1..12");
        }
        entry.key = {*condition, static_cast<int>(take), *instrument};
        std::filesystem::path wav = trim(fields[1]);
        entry.wav_path = wav.is_absolute() ? wav : base_dir / wav;
        if (index.entries.count(entry.key) != 0) {
            throw ParseError(source, i + 1, "duplicate recording " + entry.key.to_string());
        }
        if (!std::filesystem::exists(entry.wav_path)) {
            index.report.push_back("missing audio for " + entry.key.to_string() + ": " +
                                   entry.wav_path.string());
        }
        index.entries.emplace(entry.key, std::move(entry));
    }

    std::set<std::pair<Condition, int>> takes;
    for (const auto& [key, entry] : index.entries) {
        takes.insert({key.condition, key.take});
    }
    for (const auto& [condition, take] : takes) {
        for (auto instrument : kInstruments) {
            if (index.find({condition, take, instrument}) == nullptr) {
                index.report.push_back("incomplete quartet: no " + to_string(instrument) + " for " +
                                       to_string(condition) + std::to_string(take));
            }
        }
    }
    return index;
}

DatasetIndex load_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_text_file(path), path.parent_path(), path.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

}  // namespace onsetlab
