//
//  annotations.h
//  onsetlab
//
//  Human annotation tracks, onset-type score files and dataset manifests.
//
//  Annotation file: one onset per line, decimal seconds, optionally
//  followed by a tab and a free-text label. File names follow
//  <condition><take>_<instrument>_<annotator>.txt, e.g. NR12_VA_a2.txt.
//

#pragma once

#include "onsetlab/common.h"

#include <array>
#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace onsetlab {

enum class Instrument { VN1, VN2, VA, VC };
enum class Condition { NR, SP, DP };

std::string to_string(Instrument instrument);
std::string to_string(Condition condition);
std::optional<Instrument> instrument_from_string(const std::string& text);
std::optional<Condition> condition_from_string(const std::string& text);

inline constexpr std::array<Instrument, 4> kInstruments = {Instrument::VA, Instrument::VC,
                                                          Instrument::VN1, Instrument::VN2};

struct RecordingKey {
    Condition condition = Condition::NR;
    int take = 1;
    Instrument instrument = Instrument::VA;

    auto operator<=>(const RecordingKey&) const = default;

    /// e.g. "NR12_VA"
    std::string to_string() const;
};

struct TrackMetadata {
    std::string annotator_id;
    RecordingKey recording;
};

struct AnnotationTrack {
    std::string annotator_id;
    Instrument instrument = Instrument::VA;
    Condition condition = Condition::NR;
    int take = 1;
    OnsetList onsets;
    std::vector<std::string> labels;  // empty, or one per onset
    std::optional<double> experience_years;

    RecordingKey recording() const { return {condition, take, instrument}; }
    std::string recording_id() const { return recording().to_string(); }
};

/// Throws Error when a field is out of range or the onsets are not
/// strictly increasing.
void validate_track(const AnnotationTrack& track);

/// Parses `<condition><take>_<instrument>_<annotator>` from a file name.
std::optional<TrackMetadata> metadata_from_filename(const std::string& filename);

/// Parses annotation text; unsorted input is sorted with a warning.
AnnotationTrack parse_annotation_text(const std::string& text, const std::string& source,
                                      const TrackMetadata& metadata,
                                      Diagnostics* diag = nullptr);

/// Metadata comes from `metadata` when given, otherwise from the file name.
AnnotationTrack parse_annotation(const std::filesystem::path& path,
                                 const std::optional<TrackMetadata>& metadata = std::nullopt,
                                 Diagnostics* diag = nullptr);

std::string format_annotation(const AnnotationTrack& track);

void write_annotation(const std::filesystem::path& path, const AnnotationTrack& track);

/// Sequential scan that keeps the first onset and drops every later onset
/// closer than `min_ioi` to the last kept one.
std::vector<double> dedup_short_ioi(const std::vector<double>& times, double min_ioi = 0.030);

AnnotationTrack dedup_short_ioi(const AnnotationTrack& track, double min_ioi = 0.030);

/// `annotator_id,experience_years` CSV.
std::map<std::string, double> load_experience(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Onset types

enum class Stopping { OpenString, StoppedNote };
enum class Articulation { BowStart, FingerChange };

struct OnsetTypeLabel {
    Stopping stopping = Stopping::StoppedNote;
    Articulation articulation = Articulation::BowStart;
};

enum class OnsetCategory { OpenString = 0, StoppedNote = 1, BowStart = 2, FingerChange = 3 };

inline constexpr std::array<OnsetCategory, 4> kOnsetCategories = {
    OnsetCategory::OpenString, OnsetCategory::StoppedNote, OnsetCategory::BowStart,
    OnsetCategory::FingerChange};

std::string to_string(OnsetCategory category);

/// True when the label falls in the category (each label is in exactly
/// one category of each complementary pair).
bool in_category(const OnsetTypeLabel& label, OnsetCategory category);

struct ScoredNote {
    double time = 0.0;
    OnsetTypeLabel label;
    std::string note_name;
};

/// CSV with header `time,note,stopping,articulation`; stopping is
/// OpenString|StoppedNote and articulation BowStart|FingerChange
/// (case-insensitive).
std::vector<ScoredNote> parse_score_csv(const std::string& text, const std::string& source);

std::vector<ScoredNote> load_score_annotations(const std::filesystem::path& path);

struct CategoryCounts {
    std::size_t total = 0;
    std::array<std::size_t, 4> per_category{};

    std::size_t operator[](OnsetCategory c) const {
        return per_category[static_cast<std::size_t>(c)];
    }
};

CategoryCounts count_categories(const std::vector<ScoredNote>& notes);

// ---------------------------------------------------------------------------
// Dataset manifest

struct ManifestEntry {
    std::string recording_id;
    std::filesystem::path wav_path;  // resolved against the manifest directory
    RecordingKey key;
};

struct DatasetIndex {
    std::map<RecordingKey, ManifestEntry> entries;
    std::vector<std::string> report;  // dangling paths, incomplete quartets

    const ManifestEntry* find(const RecordingKey& key) const;
    std::size_t count(Condition condition) const;
    std::size_t size() const { return entries.size(); }
};

/// CSV with header `recording_id,wav_path,instrument,condition,take`.
/// Duplicate (condition, take, instrument) keys are errors; missing audio
/// files are only reported.
DatasetIndex parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                            const std::string& source);

DatasetIndex load_manifest(const std::filesystem::path& path);

/// Minimal CSV field splitter with double-quote support.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace onsetlab
