#include "swarm/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace swarm::nn {

namespace {

constexpr char kMagic[8] = {'S', 'W', 'A', 'R', 'M', 'C', 'K', 'P'};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ContractError("checkpoint: truncated file");
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamList& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ContractError("checkpoint: cannot open for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    write_pod<uint32_t>(out, kCheckpointVersion);
    write_pod<uint64_t>(out, params.size());
    for (const Param* p : params) {
        write_pod<uint32_t>(out, static_cast<uint32_t>(p->name.size()));
        out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        write_pod<uint64_t>(out, static_cast<uint64_t>(p->w.rows()));
        write_pod<uint64_t>(out, static_cast<uint64_t>(p->w.cols()));
        for (long r = 0; r < p->w.rows(); ++r)
            for (long c = 0; c < p->w.cols(); ++c) write_pod<double>(out, p->w(r, c));
    }
    if (!out) throw ContractError("checkpoint: write failed: " + path);
}

void load_checkpoint(const std::string& path, const ParamList& params) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("checkpoint: cannot open: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ContractError("checkpoint: bad magic in " + path);
    uint32_t version = read_pod<uint32_t>(in);
    if (version != kCheckpointVersion) {
        std::ostringstream msg;
        msg << "checkpoint: version mismatch in " << path << ": file has " << version
            << ", this build reads " << kCheckpointVersion;
        throw ContractError(msg.str());
    }
    uint64_t count = read_pod<uint64_t>(in);

    std::map<std::string, MatrixXd> tensors;
    for (uint64_t i = 0; i < count; ++i) {
        uint32_t name_len = read_pod<uint32_t>(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        uint64_t rows = read_pod<uint64_t>(in);
        uint64_t cols = read_pod<uint64_t>(in);
        MatrixXd m(rows, cols);
        for (uint64_t r = 0; r < rows; ++r)
            for (uint64_t c = 0; c < cols; ++c) m(r, c) = read_pod<double>(in);
        tensors.emplace(std::move(name), std::move(m));
    }

    for (Param* p : params) {
        auto it = tensors.find(p->name);
        if (it == tensors.end())
            throw ContractError("checkpoint: missing tensor '" + p->name + "' in " + path);
        if (it->second.rows() != p->w.rows() || it->second.cols() != p->w.cols())
            throw ContractError("checkpoint: shape mismatch for tensor '" + p->name + "'");
        p->w = it->second;
    }
}

}  // namespace swarm::nn
