#include "jokemeter/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jokemeter {

namespace {
constexpr const char* kMagic = "JOKEMETER-CKPT v1";

std::string hexfloat(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}
}  // namespace

void save_checkpoint(const std::string& path, const std::string& config_json,
                     std::uint64_t vocab_hash, const std::vector<const Parameter*>& params) {
    if (config_json.find('\n') != std::string::npos)
        throw std::invalid_argument("config JSON must be a single line");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << kMagic << "\n";
    out << "config " << config_json << "\n";
    out << "vocab_hash " << std::hex << vocab_hash << std::dec << "\n";
    for (const Parameter* p : params) {
        out << "param " << p->name << " " << p->value.shape.size();
        for (int e : p->value.shape) out << " " << e;
        out << "\n";
        for (std::int64_t i = 0; i < p->value.size(); ++i) {
            out << hexfloat(p->value[i]);
            out << ((i % 8 == 7 || i + 1 == p->value.size()) ? "\n" : " ");
        }
    }
    out << "end\n";
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw std::runtime_error("bad checkpoint magic in " + path);
    Checkpoint ck;
    if (!std::getline(in, line) || line.rfind("config ", 0) != 0)
        throw std::runtime_error("checkpoint missing config line");
    ck.config_json = line.substr(7);
    if (!std::getline(in, line) || line.rfind("vocab_hash ", 0) != 0)
        throw std::runtime_error("checkpoint missing vocab_hash line");
    ck.vocab_hash = std::stoull(line.substr(11), nullptr, 16);
    while (std::getline(in, line)) {
        if (line == "end") return ck;
        std::istringstream is(line);
        std::string kw, name;
        int ndims;
        if (!(is >> kw >> name >> ndims) || kw != "param")
            throw std::runtime_error("malformed checkpoint line: " + line);
        std::vector<int> shape(ndims);
        for (int& e : shape)
            if (!(is >> e)) throw std::runtime_error("truncated shape for " + name);
        Tensor t(shape);
        std::int64_t read = 0;
        while (read < t.size()) {
            std::string tok;
            if (!(in >> tok)) throw std::runtime_error("truncated values for " + name);
            t[read++] = std::strtod(tok.c_str(), nullptr);
        }
        in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        ck.tensors.emplace(name, std::move(t));
    }
    throw std::runtime_error("checkpoint missing end marker");
}

}  // namespace jokemeter
