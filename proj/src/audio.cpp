// Copyright 2026 The adfkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adf/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "adf/error.hpp"

namespace adf {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

void put32(std::ostream& o, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  o.write(reinterpret_cast<const char*>(b), 4);
}
void put16(std::ostream& o, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  o.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open audio file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  auto bad = [&](const std::string& why) { return DataError(path.string() + ": " + why); };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw bad("not a RIFF/WAVE file");
  }
  int format = 0, channels = 0, rate = 0, bits = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t len = le32(hdr + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(len, bytes.size() - body);
    if (std::memcmp(hdr, "fmt ", 4) == 0 && avail >= 16) {
      format = le16(bytes.data() + body);
      channels = le16(bytes.data() + body + 2);
      rate = static_cast<int>(le32(bytes.data() + body + 4));
      bits = le16(bytes.data() + body + 14);
      if (format == 0xFFFE && avail >= 26) format = le16(bytes.data() + body + 24);
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = avail;
    }
    pos = body + len + (len & 1);
  }
  if (!data || channels <= 0 || rate <= 0) throw bad("missing fmt or data chunk");
  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32) throw bad("unsupported encoding (need 16-bit PCM or 32-bit float)");
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  const std::size_t frames = data_len / frame_bytes;
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const unsigned char* p = data + f * frame_bytes + c * (bits / 8);
      if (pcm16) {
        acc += static_cast<std::int16_t>(le16(p)) / 32768.0;
      } else {
        float v;
        std::uint32_t u = le32(p);
        std::memcpy(&v, &u, 4);
        acc += v;
      }
    }
    w.samples[f] = static_cast<float>(acc / channels);
  }
  return w;
}

void write_wav(const std::filesystem::path& path, const Waveform& wave) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write audio file " + path.string());
  const std::uint32_t data_len = static_cast<std::uint32_t>(wave.samples.size() * 2);
  out.write("RIFF", 4);
  put32(out, 36 + data_len);
  out.write("WAVEfmt ", 8);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put32(out, static_cast<std::uint32_t>(wave.sample_rate * 2));
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, data_len);
  for (float s : wave.samples) {
    const double c = std::clamp(static_cast<double>(s), -1.0, 1.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32767.0))));
  }
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<float> resample(std::span<const float> input, int from_rate, int to_rate) {
  if (from_rate <= 0 || to_rate <= 0) {
    throw DataError("InvalidRate: sample rates must be positive (got " +
                    std::to_string(from_rate) + " -> " + std::to_string(to_rate) + ")");
  }
  if (from_rate == to_rate) return {input.begin(), input.end()};
  const double ratio = static_cast<double>(to_rate) / from_rate;
  const std::size_t n_out =
      static_cast<std::size_t>(std::llround(static_cast<double>(input.size()) * ratio));
  // Cutoff relative to the input Nyquist; below 1 when downsampling.
  const double fc = std::min(1.0, ratio);
  constexpr int kZeroCrossings = 32;
  const double half_width = kZeroCrossings / fc;
  const long n_in = static_cast<long>(input.size());
  std::vector<float> out(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double center = static_cast<double>(i) / ratio;
    const long lo = std::max(0L, static_cast<long>(std::ceil(center - half_width)));
    const long hi = std::min(n_in - 1, static_cast<long>(std::floor(center + half_width)));
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double x = center - static_cast<double>(k);
      const double arg = std::numbers::pi * fc * x;
      const double sinc = x == 0.0 ? 1.0 : std::sin(arg) / arg;
      const double window = 0.5 + 0.5 * std::cos(std::numbers::pi * x / half_width);
      acc += input[k] * fc * sinc * window;
    }
    out[i] = static_cast<float>(acc);
  }
  return out;
}

int TransformParams::target_samples() const {
  return static_cast<int>(std::lround(duration_s * sample_rate));
}

std::vector<float> transform(std::span<const float> wave, int source_rate,
                             const TransformParams& params, Rng* crop_rng) {
  if (wave.empty()) throw DataError("EmptyWaveform: input has no samples");
  if (source_rate <= 0 || params.sample_rate <= 0) {
    throw DataError("InvalidRate: sample rates must be positive");
  }
  const std::vector<float> x = resample(wave, source_rate, params.sample_rate);
  if (x.empty()) throw DataError("EmptyWaveform: nothing left after resampling");
  const std::size_t target = static_cast<std::size_t>(params.target_samples());
  std::vector<float> out(target, 0.0f);
  if (x.size() >= target) {
    std::size_t start = 0;
    if (crop_rng && x.size() > target) {
      std::uniform_int_distribution<std::size_t> pick(0, x.size() - target);
      start = pick(*crop_rng);
    }
    std::copy_n(x.begin() + static_cast<long>(start), target, out.begin());
  } else if (params.pad_mode == PadMode::repeat) {
    for (std::size_t i = 0; i < target; ++i) out[i] = x[i % x.size()];
  } else {
    std::copy(x.begin(), x.end(), out.begin());
  }
  if (params.normalize) {
    float peak = 0.0f;
    for (float v : out) peak = std::max(peak, std::abs(v));
    if (peak > 0.0f) {
      for (float& v : out) v /= peak;
    }
  }
  return out;
}

}  // namespace adf
