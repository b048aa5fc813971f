//
//  audio_io.cpp
//  onsetlab
//

#include "onsetlab/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace onsetlab {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
    }
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

struct WavFormat {
    std::uint16_t tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, const WavFormat& fmt) {
    if (fmt.tag == kFormatFloat) {
        float f = 0.0f;
        std::memcpy(&f, p, sizeof(f));
        return static_cast<double>(f);
    }
    switch (fmt.bits) {
    case 8:
        return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
        return static_cast<double>(static_cast<std::int16_t>(read_u16(p))) / 32768.0;
    case 24: {
        std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
        if (v & 0x800000) {
            v -= 0x1000000;
        }
        return static_cast<double>(v) / 8388608.0;
    }
    case 32:
        return static_cast<double>(static_cast<std::int32_t>(read_u32(p))) / 2147483648.0;
    default:
        return 0.0;
    }
}

}  // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes, const std::string& source_id) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw Error(source_id + ": not a RIFF/WAVE file");
    }

    WavFormat fmt;
    bool have_fmt = false;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* chunk = bytes.data() + pos;
        const std::size_t size = read_u32(chunk + 4);
        const std::size_t body = pos + 8;
        const std::size_t available = std::min(size, bytes.size() - body);
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (available < 16) {
                throw Error(source_id + ": truncated fmt chunk");
            }
            const std::uint8_t* f = bytes.data() + body;
            fmt.tag = read_u16(f);
            fmt.channels = read_u16(f + 2);
            fmt.sample_rate = read_u32(f + 4);
            fmt.bits = read_u16(f + 14);
            if (fmt.tag == kFormatExtensible) {
                if (available < 26) {
                    throw Error(source_id + ": truncated WAVE_FORMAT_EXTENSIBLE header");
                }
                fmt.tag = read_u16(f + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = available;
        }
        pos = body + size + (size & 1);
    }

    if (!have_fmt) {
        throw Error(source_id + ": missing fmt chunk");
    }
    if (data == nullptr) {
        throw Error(source_id + ": missing data chunk");
    }
    const bool int_ok = fmt.tag == kFormatPcm &&
                        (fmt.bits == 8 || fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
    const bool float_ok = fmt.tag == kFormatFloat && fmt.bits == 32;
    if (!int_ok && !float_ok) {
        throw Error(source_id + ": unsupported encoding (format tag " + std::to_string(fmt.tag) +
                    ", " + std::to_string(fmt.bits) + " bits)");
    }
    if (fmt.channels == 0 || fmt.sample_rate == 0) {
        throw Error(source_id + ": invalid channel count or sample rate");
    }

    const std::size_t bytes_per_sample = fmt.bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
    const std::size_t frames = data_size / frame_bytes;
    if (frames == 0) {
        throw Error(source_id + ": zero-length audio");
    }

    AudioBuffer out;
    out.sample_rate = static_cast<int>(fmt.sample_rate);
    out.source_id = source_id;
    out.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        const std::uint8_t* frame = data + i * frame_bytes;
        double sum = 0.0;
        for (std::size_t c = 0; c < fmt.channels; ++c) {
            const double v = decode_sample(frame + c * bytes_per_sample, fmt);
            if (!std::isfinite(v)) {
                throw Error(source_id + ": non-finite sample at frame " + std::to_string(i));
            }
            sum += v;
        }
        out.samples[i] = std::clamp(sum / static_cast<double>(fmt.channels), -1.0, 1.0);
    }
    return out;
}

AudioBuffer load_audio(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open audio file: " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_wav(bytes, path.stem().string());
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio, WavEncoding encoding) {
    if (audio.sample_rate <= 0) {
        throw Error("encode_wav: sample rate must be positive");
    }
    std::uint16_t bits = 16;
    std::uint16_t tag = kFormatPcm;
    switch (encoding) {
    case WavEncoding::Pcm16:
        bits = 16;
        break;
    case WavEncoding::Pcm24:
        bits = 24;
        break;
    case WavEncoding::Pcm32:
        bits = 32;
        break;
    case WavEncoding::Float32:
        bits = 32;
        tag = kFormatFloat;
        break;
    }
    const std::uint32_t bytes_per_sample = bits / 8u;
    const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * bytes_per_sample);

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_size);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, tag);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(audio.sample_rate) * bytes_per_sample);
    put_u16(out, static_cast<std::uint16_t>(bytes_per_sample));
    put_u16(out, bits);
    put_tag(out, "data");
    put_u32(out, data_size);

    for (double s : audio.samples) {
        const double x = std::clamp(s, -1.0, 1.0);
        switch (encoding) {
        case WavEncoding::Pcm16:
            put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(x * 32767.0))));
            break;
        case WavEncoding::Pcm24: {
            const auto v = static_cast<std::uint32_t>(static_cast<std::int32_t>(std::lround(x * 8388607.0)));
            out.push_back(static_cast<std::uint8_t>(v & 0xFF));
            out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
            out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
            break;
        }
        case WavEncoding::Pcm32:
            put_u32(out, static_cast<std::uint32_t>(static_cast<std::int32_t>(std::llround(x * 2147483647.0))));
            break;
        case WavEncoding::Float32: {
            const float f = static_cast<float>(x);
            std::uint32_t v = 0;
            std::memcpy(&v, &f, sizeof(v));
            put_u32(out, v);
            break;
        }
        }
    }
    return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio, WavEncoding encoding) {
    const auto bytes = encode_wav(audio, encoding);
    write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

DetectionFunction parse_activation(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(source, 1, "missing '# fps=<value>' header");
    }
    const std::string prefix = "# fps=";
    if (line.rfind(prefix, 0) != 0) {
        throw ParseError(source, 1, "missing '# fps=<value>' header");
    }
    DetectionFunction df;
    if (!parse_decimal(line.substr(prefix.size()), df.fps) || !std::isfinite(df.fps)) {
        throw ParseError(source, 1, "fps is not a number");
    }
    if (df.fps <= 0.0) {
        throw ParseError(source, 1, "fps must be positive");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        double v = 0.0;
        if (!parse_decimal(line, v)) {
            throw ParseError(source, line_no, "non-numeric value '" + line + "'");
        }
        if (!std::isfinite(v)) {
            throw ParseError(source, line_no, "value is not finite");
        }
        df.values.push_back(v);
    }
    df.detector = DetectorId::External;
    return df;
}

DetectionFunction load_activation(const std::filesystem::path& path) {
    return parse_activation(read_text_file(path), path.string());
}

std::string format_activation(const DetectionFunction& df) {
    std::string out = "# fps=" + format_decimal(df.fps) + "\n";
    for (double v : df.values) {
        out += format_decimal(v);
        out += '\n';
    }
    return out;
}

void save_activation(const std::filesystem::path& path, const DetectionFunction& df) {
    write_file_atomic(path, format_activation(df));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open file: " + path.string());
    }
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write file: " + path.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw Error("write failed: " + path.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace onsetlab
