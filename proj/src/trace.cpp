#include "snapsim/trace.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "snapsim/errors.hpp"

namespace snapsim {

namespace {

struct Fields {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno;

    const std::string& get(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end())
            throw IoError("trace line " + std::to_string(lineno) + ": missing field '" + key + "': " + line);
        return it->second;
    }
};

double to_time(const Fields& f, const std::string& key) {
    const std::string& v = f.get(key);
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw IoError("trace line " + std::to_string(f.lineno) + ": bad number '" + v + "'");
    }
}

std::uint64_t to_u64(const Fields& f, const std::string& key) {
    const std::string& v = f.get(key);
    try {
        std::size_t used = 0;
        std::uint64_t x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw IoError("trace line " + std::to_string(f.lineno) + ": bad integer '" + v + "'");
    }
}

ChannelId to_channel(const Fields& f) {
    const std::string& v = f.get("ch");
    auto arrow = v.find("->");
    if (arrow == std::string::npos)
        throw IoError("trace line " + std::to_string(f.lineno) + ": bad channel '" + v + "'");
    try {
        return ChannelId{static_cast<ProcessId>(std::stoul(v.substr(0, arrow))),
                         static_cast<ProcessId>(std::stoul(v.substr(arrow + 2)))};
    } catch (const std::exception&) {
        throw IoError("trace line " + std::to_string(f.lineno) + ": bad channel '" + v + "'");
    }
}

WireKind to_wire(const Fields& f) {
    const std::string& v = f.get("kind");
    if (v == "app") return WireKind::App;
    if (v == "marker") return WireKind::Marker;
    if (v == "request") return WireKind::Request;
    if (v == "notice") return WireKind::Notice;
    throw IoError("trace line " + std::to_string(f.lineno) + ": bad kind '" + v + "'");
}

} // namespace

ParsedTrace parse_trace(std::istream& in) {
    ParsedTrace out;
    std::map<ProcessId, LocalSnapshot> locals;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tag;
        ss >> tag;
        Fields f{{}, line, lineno};
        std::string tok;
        while (ss >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw IoError("trace line " + std::to_string(lineno) + ": expected key=value, got '" + tok +
                              "'");
            f.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }

        if (tag == "SEND") {
            out.log.send(to_time(f, "t"), to_channel(f), to_u64(f, "id"), to_wire(f));
        } else if (tag == "DELIVER") {
            out.log.deliver(to_time(f, "t"), to_channel(f), to_u64(f, "id"), to_wire(f));
        } else if (tag == "RECORD") {
            ProcessId pid = static_cast<ProcessId>(to_u64(f, "pid"));
            out.log.record(to_time(f, "t"), pid);
            LocalSnapshot& ls = locals[pid];
            ls.pid = pid;
            ls.record_time = to_time(f, "t");
        } else if (tag == "WINDOW") {
            RecordingWindow w;
            w.pid = static_cast<ProcessId>(to_u64(f, "pid"));
            w.start = to_time(f, "start");
            w.end = to_time(f, "end");
            w.finalized_at_quiescence = f.get("finalized") == "true";
            out.windows.push_back(w);
        } else if (tag == "CHANNELSTATE") {
            ChannelId ch = to_channel(f);
            auto it = locals.find(ch.dst);
            if (it == locals.end())
                throw IoError("trace line " + std::to_string(lineno) + ": channel state for pid " +
                              std::to_string(ch.dst) + " before its RECORD line");
            std::vector<MsgId>& ids = it->second.channel_states[ch];
            std::stringstream ms(f.get("msgs"));
            std::string id;
            while (std::getline(ms, id, ',')) {
                if (id.empty()) continue;
                try {
                    ids.push_back(std::stoull(id));
                } catch (const std::exception&) {
                    throw IoError("trace line " + std::to_string(lineno) + ": bad msg id '" + id + "'");
                }
            }
        } else {
            throw IoError("trace line " + std::to_string(lineno) + ": unknown tag '" + tag + "'");
        }
    }
    out.snapshot.locals.reserve(locals.size());
    for (auto& [pid, ls] : locals) out.snapshot.locals.push_back(std::move(ls));
    return out;
}

ParsedTrace parse_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file " + path.string());
    return parse_trace(in);
}

} // namespace snapsim
