#include "rydat/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rydat/digest.hpp"
#include "rydat/errors.hpp"
#include "rydat/units.hpp"

namespace rydat {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kind_name(ValueKind k) {
    return k == ValueKind::Transmission ? "transmission" : "cross-section-m2";
}
const char* stage_name(TraceStage s) {
    return s == TraceStage::Ideal ? "ideal" : "instrumented";
}

} // namespace

std::string trace_to_string(const SpectrumTrace& trace) {
    trace.validate();
    std::ostringstream out;
    out << "# rydat-spectrum v1\n";
    out << "# x_unit = MHz\n";
    out << "# kind = " << kind_name(trace.kind) << "\n";
    out << "# stage = " << stage_name(trace.stage) << "\n";
    out << "# columns = detuning value\n";
    for (std::size_t i = 0; i < trace.detuning.size(); ++i)
        out << fmt17(units::rads_to_mhz(trace.detuning[i])) << "\t" << fmt17(trace.value[i])
            << "\n";
    return out.str();
}

void write_trace(const std::string& path, const SpectrumTrace& trace) {
    write_file_atomic(path, trace_to_string(trace));
}

SpectrumTrace trace_from_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    SpectrumTrace trace;
    std::string x_unit, kind, stage;
    std::string raw;
    long line = 0;
    bool saw_magic = false;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        if (s.empty()) continue;
        if (s[0] == '#') {
            std::string body = s.substr(1);
            const auto eq = body.find('=');
            if (body.find("rydat-spectrum") != std::string::npos) {
                saw_magic = true;
            } else if (eq != std::string::npos) {
                std::istringstream k(body.substr(0, eq));
                std::string key;
                k >> key;
                std::istringstream v(body.substr(eq + 1));
                std::string value;
                v >> value;
                if (key == "x_unit") x_unit = value;
                else if (key == "kind") kind = value;
                else if (key == "stage") stage = value;
                // other comment lines are free-form
            }
            continue;
        }
        std::istringstream row(s);
        double x, y;
        if (!(row >> x >> y))
            throw ParseError("expected two numeric columns in " + origin, line);
        std::string extra;
        if (row >> extra) throw ParseError("more than two columns in " + origin, line);
        trace.detuning.push_back(x);
        trace.value.push_back(y);
    }

    if (!saw_magic) throw ParseError("missing '# rydat-spectrum v1' header in " + origin);
    if (x_unit.empty()) throw ParseError("missing x_unit header in " + origin);
    if (kind.empty()) throw ParseError("missing kind header in " + origin);
    if (stage.empty()) throw ParseError("missing stage header in " + origin);

    double to_rads;
    if (x_unit == "MHz") to_rads = units::two_pi * 1e6;
    else if (x_unit == "rad/s") to_rads = 1.0;
    else throw ParseError("unsupported x_unit '" + x_unit + "' in " + origin);
    for (auto& d : trace.detuning) d *= to_rads;

    if (kind == "transmission") trace.kind = ValueKind::Transmission;
    else if (kind == "cross-section-m2") trace.kind = ValueKind::CrossSection;
    else throw ParseError("unsupported kind '" + kind + "' in " + origin);

    if (stage == "ideal") trace.stage = TraceStage::Ideal;
    else if (stage == "instrumented") trace.stage = TraceStage::Instrumented;
    else throw ParseError("unsupported stage '" + stage + "' in " + origin);

    if (trace.detuning.size() < 2) throw ParseError("trace has fewer than 2 samples: " + origin);
    for (std::size_t i = 0; i + 1 < trace.detuning.size(); ++i)
        if (!(trace.detuning[i] < trace.detuning[i + 1]))
            throw ParseError("detunings not strictly increasing in " + origin,
                             static_cast<long>(i + 2));
    return trace;
}

SpectrumTrace read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return trace_from_string(buf.str(), path);
}

void write_image(const std::string& path, const TransmissionImage& image) {
    std::ostringstream out;
    const bool pgm = path.size() > 4 && path.substr(path.size() - 4) == ".pgm";
    if (pgm) {
        constexpr int maxval = 65535;
        out << "P2\n";
        out << "# pixel_um " << fmt17(units::m_to_um(image.dx)) << " "
            << fmt17(units::m_to_um(image.dy)) << "\n";
        out << image.nx << " " << image.ny << "\n" << maxval << "\n";
        for (int iy = 0; iy < image.ny; ++iy) {
            for (int ix = 0; ix < image.nx; ++ix) {
                const double v = std::clamp(image.at(ix, iy), 0.0, 1.0);
                out << static_cast<int>(std::lround(v * maxval))
                    << (ix + 1 == image.nx ? '\n' : ' ');
            }
        }
    } else {
        out << "# rydat-image v1\n";
        out << "# pixel_um = " << fmt17(units::m_to_um(image.dx)) << " "
            << fmt17(units::m_to_um(image.dy)) << "\n";
        for (int iy = 0; iy < image.ny; ++iy) {
            for (int ix = 0; ix < image.nx; ++ix)
                out << fmt17(image.at(ix, iy)) << (ix + 1 == image.nx ? '\n' : '\t');
        }
    }
    write_file_atomic(path, out.str());
}

TransmissionImage read_image(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);

    TransmissionImage img;
    const bool pgm = path.size() > 4 && path.substr(path.size() - 4) == ".pgm";
    if (pgm) {
        std::string magic;
        in >> magic;
        if (magic != "P2") throw ParseError("expected ascii PGM (P2): " + path, 1);
        // pixel scale hides in a comment before the dimensions
        std::string token;
        double dx_um = 0, dy_um = 0;
        while (in >> token) {
            if (token == "#") {
                std::string word;
                in >> word;
                if (word == "pixel_um") in >> dx_um >> dy_um;
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            break;
        }
        if (dx_um <= 0 || dy_um <= 0)
            throw ParseError("PGM image needs a '# pixel_um dx dy' comment: " + path);
        img.nx = std::stoi(token);
        int maxval = 0;
        in >> img.ny >> maxval;
        if (img.nx < 2 || img.ny < 2 || maxval < 1)
            throw ParseError("bad PGM dimensions in " + path);
        img.dx = units::um_to_m(dx_um);
        img.dy = units::um_to_m(dy_um);
        img.values.resize(static_cast<std::size_t>(img.nx) * img.ny);
        for (auto& v : img.values) {
            long raw = 0;
            if (!(in >> raw)) throw ParseError("truncated PGM pixel data in " + path);
            v = static_cast<double>(raw) / maxval;
        }
        return img;
    }

    std::string raw;
    long line = 0;
    double dx_um = 0, dy_um = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        if (raw[0] == '#') {
            std::istringstream hs(raw.substr(1));
            std::string key, eq;
            hs >> key;
            if (key == "pixel_um") {
                hs >> eq >> dx_um >> dy_um;
                if (eq != "=") throw ParseError("malformed pixel_um header", line);
            }
            continue;
        }
        std::istringstream row(raw);
        std::vector<double> vals;
        double v;
        while (row >> v) vals.push_back(v);
        if (vals.empty()) throw ParseError("non-numeric image row in " + path, line);
        if (!rows.empty() && vals.size() != rows.front().size())
            throw ParseError("ragged image rows in " + path, line);
        rows.push_back(std::move(vals));
    }
    if (dx_um <= 0 || dy_um <= 0)
        throw ParseError("image needs a '# pixel_um = dx dy' header: " + path);
    if (rows.size() < 2) throw ParseError("image needs at least 2 rows: " + path);

    img.ny = static_cast<int>(rows.size());
    img.nx = static_cast<int>(rows.front().size());
    img.dx = units::um_to_m(dx_um);
    img.dy = units::um_to_m(dy_um);
    img.values.reserve(static_cast<std::size_t>(img.nx) * img.ny);
    for (const auto& r : rows)
        for (double v : r) img.values.push_back(v);
    return img;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string hex64(std::uint64_t value) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFoundError(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64(buf.str());
}

} // namespace rydat
