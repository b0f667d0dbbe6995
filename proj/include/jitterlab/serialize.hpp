#pragma once

// JSON forms of models and channel specs; binary and CSV records of sampled
// traces.

#include <jitterlab/multisig.hpp>
#include <jitterlab/tiadc.hpp>
#include <jitterlab/varjitter.hpp>

#include <json.hpp>

#include <iosfwd>

namespace jitterlab {

using json = nlohmann::json;

json matrix_to_json(const MatR& m);
MatR matrix_from_json(const json& j, const char* what);

// {"V": [[...]], "sigma_eps": [[...]]}, row-major.
json to_json(const VarModel& model);
VarModel var_model_from_json(const json& j);

// {"tiadc": {"M": ..., "phi": ..., "sigma_eps": [[...]]}}
json to_json(const TiAdcModel& model);
TiAdcModel tiadc_from_json(const json& j);

json to_json(const ChannelSpec& spec);
ChannelSpec channel_spec_from_json(const json& j);

// Little-endian record: magic "JLTR", u32 version (1), u64 N, u64 M,
// M x f64 fs, then N*M time-major complex64 (f32 re, f32 im) samples of y.
void write_trace_binary(std::ostream& out, const SampleTrace& trace);

struct TraceRecord {
    ComplexArray y;
    std::vector<double> fs;
};

TraceRecord read_trace_binary(std::istream& in);

// One row per sample and channel: n,channel,y_re,y_im,xi.
void write_trace_csv(std::ostream& out, const SampleTrace& trace);

// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite).
std::string format_double(double v);

}  // namespace jitterlab
