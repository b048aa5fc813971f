//
//  audio_io.h
//  onsetlab
//
//  RIFF/WAVE decoding to normalized mono buffers, and the plain-text
//  activation file format used to exchange detection functions.
//

#pragma once

#include "onsetlab/common.h"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace onsetlab {

struct AudioBuffer {
    std::vector<double> samples;  // mono, each in [-1, 1]
    int sample_rate = 44100;
    std::string source_id;

    double duration() const {
        return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
    }
};

enum class WavEncoding { Pcm16, Pcm24, Pcm32, Float32 };

/// Decodes PCM 8/16/24/32-bit integer or 32-bit float WAV data. Multichannel
/// input is downmixed by channel mean. Throws Error on unreadable or
/// unsupported input and on zero-length audio.
AudioBuffer load_audio(const std::filesystem::path& path);

/// Same as load_audio, from an in-memory file image.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes, const std::string& source_id);

std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio, WavEncoding encoding);

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavEncoding encoding = WavEncoding::Pcm16);

/// Activation file: `# fps=<decimal>` header, then one finite value per line.
DetectionFunction load_activation(const std::filesystem::path& path);

DetectionFunction parse_activation(const std::string& text, const std::string& source);

/// Canonical text: shortest round-trip decimals, '\n' terminated lines.
std::string format_activation(const DetectionFunction& df);

void save_activation(const std::filesystem::path& path, const DetectionFunction& df);

/// Reads a whole file; throws Error naming the path when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace onsetlab
