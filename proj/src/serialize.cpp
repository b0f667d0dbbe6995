#include <jitterlab/serialize.hpp>

#include <jitterlab/errors.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace jitterlab {

namespace {

constexpr std::array<char, 4> kMagic{'J', 'L', 'T', 'R'};
constexpr std::uint32_t kVersion = 1;

template <class U>
void put_le(std::ostream& out, U v) {
    std::array<char, sizeof(U)> b;
    for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), b.size());
}

template <class U>
U get_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> b;
    if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw SchemaError("trace record: truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
    return v;
}

const json& field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        throw SchemaError(std::string(what) + ": missing field '" + key + "'");
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw SchemaError(std::string(what) + ": expected a number");
    return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

json matrix_to_json(const MatR& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatR matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw SchemaError(std::string(what) + ": expected a non-empty array of rows");
    const std::size_t rows = j.size(), cols = j[0].size();
    MatR m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw SchemaError(std::string(what) + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = number(j[r][c], what);
    }
    return m;
}

json to_json(const VarModel& model) {
    return {{"V", matrix_to_json(model.transition())}, {"sigma_eps", matrix_to_json(model.innovation_cov())}};
}

VarModel var_model_from_json(const json& j) {
    return VarModel(matrix_from_json(field(j, "V", "VarModel"), "VarModel.V"),
                    matrix_from_json(field(j, "sigma_eps", "VarModel"), "VarModel.sigma_eps"));
}

json to_json(const TiAdcModel& model) {
    return {{"tiadc",
             {{"M", model.channels()}, {"phi", model.phi()}, {"sigma_eps", matrix_to_json(model.sigma_eps())}}}};
}

TiAdcModel tiadc_from_json(const json& j) {
    const json& t = field(j, "tiadc", "TiAdcModel");
    const json& m = field(t, "M", "TiAdcModel");
    if (!m.is_number_unsigned()) throw SchemaError("TiAdcModel: M must be a positive integer");
    return build_tiadc(m.get<std::size_t>(), number(field(t, "phi", "TiAdcModel"), "TiAdcModel.phi"),
                       matrix_from_json(field(t, "sigma_eps", "TiAdcModel"), "TiAdcModel.sigma_eps"));
}

json to_json(const ChannelSpec& spec) {
    json carriers = json::array();
    for (const auto& c : spec.carriers) carriers.push_back({c.index, c.symbol.real(), c.symbol.imag()});
    return {{"fs", spec.fs},
            {"n_fft", spec.n_fft},
            {"payload_band_hz", spec.payload_band_hz},
            {"interleave_shift", spec.interleave_shift},
            {"pilot", {{"amplitude", spec.pilot.amplitude}, {"freq_hz", spec.pilot.freq_hz}}},
            {"carriers", std::move(carriers)}};
}

ChannelSpec channel_spec_from_json(const json& j) {
    constexpr const char* what = "ChannelSpec";
    ChannelSpec s;
    s.fs = number(field(j, "fs", what), what);
    const json& nf = field(j, "n_fft", what);
    if (!nf.is_number_unsigned()) throw SchemaError("ChannelSpec: n_fft must be a positive integer");
    s.n_fft = nf.get<std::size_t>();
    s.payload_band_hz = number(field(j, "payload_band_hz", what), what);
    if (j.contains("interleave_shift")) s.interleave_shift = number(j.at("interleave_shift"), what);
    const json& p = field(j, "pilot", what);
    s.pilot = {number(field(p, "amplitude", what), what), number(field(p, "freq_hz", what), what)};
    for (const auto& c : field(j, "carriers", what)) {
        if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer())
            throw SchemaError("ChannelSpec: carriers must be [index, re, im] triples");
        s.carriers.push_back({c[0].get<std::int64_t>(), cplx(number(c[1], what), number(c[2], what))});
    }
    s.validate();
    return s;
}

void write_trace_binary(std::ostream& out, const SampleTrace& trace) {
    const std::size_t n = trace.y.samples(), m = trace.y.channels();
    if (trace.fs.size() != m) throw DimensionMismatch("write_trace_binary: fs list does not match channel count");
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint64_t>(out, n);
    put_le<std::uint64_t>(out, m);
    for (double f : trace.fs) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(f));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < m; ++c) {
            put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(trace.y(k, c).real())));
            put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(trace.y(k, c).imag())));
        }
    if (!out) throw Error("write_trace_binary: stream failure");
}

TraceRecord read_trace_binary(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw SchemaError("trace record: bad magic");
    if (auto v = get_le<std::uint32_t>(in); v != kVersion)
        throw SchemaError("trace record: unsupported version " + std::to_string(v));
    const auto n = get_le<std::uint64_t>(in);
    const auto m = get_le<std::uint64_t>(in);
    if (m == 0 || m > 4096) throw SchemaError("trace record: implausible channel count");
    TraceRecord rec{ComplexArray(n, m), {}};
    for (std::uint64_t c = 0; c < m; ++c) rec.fs.push_back(std::bit_cast<double>(get_le<std::uint64_t>(in)));
    for (std::uint64_t k = 0; k < n; ++k)
        for (std::uint64_t c = 0; c < m; ++c) {
            const float re = std::bit_cast<float>(get_le<std::uint32_t>(in));
            const float im = std::bit_cast<float>(get_le<std::uint32_t>(in));
            rec.y(k, c) = cplx(re, im);
        }
    return rec;
}

void write_trace_csv(std::ostream& out, const SampleTrace& trace) {
    out << "n,channel,y_re,y_im,xi\n";
    for (std::size_t k = 0; k < trace.y.samples(); ++k)
        for (std::size_t c = 0; c < trace.y.channels(); ++c)
            out << k << ',' << c << ',' << format_double(trace.y(k, c).real()) << ','
                << format_double(trace.y(k, c).imag()) << ',' << format_double(trace.jitter.xi(k, c)) << '\n';
}

}  // namespace jitterlab
