// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "discogan/audio.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "discogan/errors.h"

namespace discogan {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

void check_pipeline_audio(const AudioBuffer& audio) {
  if (audio.sample_rate != kSampleRate) {
    throw InvalidInput("expected " + std::to_string(kSampleRate) +
                       " Hz audio, got " + std::to_string(audio.sample_rate));
  }
  for (float v : audio.samples) {
    if (!std::isfinite(v)) throw InvalidInput("audio contains non-finite samples");
  }
}

torch::Tensor to_tensor(const AudioBuffer& audio, torch::Dtype dtype) {
  auto t = torch::from_blob(const_cast<float*>(audio.samples.data()),
                            {static_cast<int64_t>(audio.samples.size())},
                            torch::kFloat32);
  return t.to(dtype, /*non_blocking=*/false, /*copy=*/true);
}

AudioBuffer from_tensor(const torch::Tensor& wav, int sample_rate) {
  auto t = wav.detach();
  if (t.dim() == 2 && t.size(0) == 1) t = t.squeeze(0);
  if (t.dim() != 1) throw InvalidInput("from_tensor expects a 1-D waveform");
  t = t.to(torch::kFloat32).contiguous();
  const float* p = t.data_ptr<float>();
  return AudioBuffer(std::vector<float>(p, p + t.numel()), sample_rate);
}

double mean_power(std::span<const float> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (float v : x) acc += static_cast<double>(v) * v;
  return acc / static_cast<double>(x.size());
}

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidInput("truncated WAV header");
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open WAV file " + path.string());

  std::array<char, 4> tag{};
  in.read(tag.data(), 4);
  if (!in || std::memcmp(tag.data(), "RIFF", 4) != 0) {
    throw InvalidInput(path.string() + ": not a RIFF file");
  }
  read_le<uint32_t>(in);
  in.read(tag.data(), 4);
  if (!in || std::memcmp(tag.data(), "WAVE", 4) != 0) {
    throw InvalidInput(path.string() + ": not a WAVE file");
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  while (true) {
    in.read(tag.data(), 4);
    if (!in) throw InvalidInput(path.string() + ": no data chunk");
    const auto chunk_size = read_le<uint32_t>(in);
    if (std::memcmp(tag.data(), "fmt ", 4) == 0) {
      format = read_le<uint16_t>(in);
      channels = read_le<uint16_t>(in);
      rate = read_le<uint32_t>(in);
      read_le<uint32_t>(in);  // byte rate
      read_le<uint16_t>(in);  // block align
      bits = read_le<uint16_t>(in);
      uint32_t consumed = 16;
      if (format == kFormatExtensible && chunk_size >= 40) {
        read_le<uint16_t>(in);  // cb size
        read_le<uint16_t>(in);  // valid bits
        read_le<uint32_t>(in);  // channel mask
        format = read_le<uint16_t>(in);  // first two bytes of the GUID
        consumed = 26;
      }
      in.seekg(chunk_size - consumed + (chunk_size & 1u), std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag.data(), "data", 4) == 0) {
      if (!have_fmt) throw InvalidInput(path.string() + ": data before fmt");
      if (channels != 1) {
        throw InvalidInput(path.string() + ": only mono WAV is supported");
      }
      AudioBuffer out;
      out.sample_rate = static_cast<int>(rate);
      if (format == kFormatPcm && bits == 16) {
        std::vector<int16_t> raw(chunk_size / 2);
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size() * 2));
        out.samples.resize(raw.size());
        std::transform(raw.begin(), raw.end(), out.samples.begin(),
                       [](int16_t v) { return static_cast<float>(v) / 32768.0f; });
      } else if (format == kFormatFloat && bits == 32) {
        out.samples.resize(chunk_size / 4);
        in.read(reinterpret_cast<char*>(out.samples.data()),
                static_cast<std::streamsize>(out.samples.size() * 4));
      } else {
        throw InvalidInput(path.string() + ": unsupported WAV encoding (format " +
                           std::to_string(format) + ", " + std::to_string(bits) +
                           " bits)");
      }
      if (!in) throw InvalidInput(path.string() + ": truncated data chunk");
      return out;
    } else {
      in.seekg(chunk_size + (chunk_size & 1u), std::ios::cur);
    }
  }
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavEncoding encoding) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write WAV file " + path.string());

  const uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const uint16_t format = encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat;
  const uint32_t data_bytes = static_cast<uint32_t>(audio.samples.size() * (bits / 8));

  out.write("RIFF", 4);
  write_le<uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<uint32_t>(out, 16);
  write_le<uint16_t>(out, format);
  write_le<uint16_t>(out, 1);
  write_le<uint32_t>(out, static_cast<uint32_t>(audio.sample_rate));
  write_le<uint32_t>(out, static_cast<uint32_t>(audio.sample_rate) * (bits / 8));
  write_le<uint16_t>(out, bits / 8);
  write_le<uint16_t>(out, bits);
  out.write("data", 4);
  write_le<uint32_t>(out, data_bytes);
  if (encoding == WavEncoding::kPcm16) {
    std::vector<int16_t> raw(audio.samples.size());
    std::transform(audio.samples.begin(), audio.samples.end(), raw.begin(), [](float v) {
      const float c = std::clamp(v, -1.0f, 32767.0f / 32768.0f);
      return static_cast<int16_t>(std::lrint(c * 32768.0f));
    });
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * 2));
  } else {
    out.write(reinterpret_cast<const char*>(audio.samples.data()),
              static_cast<std::streamsize>(audio.samples.size() * 4));
  }
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

}  // namespace discogan
