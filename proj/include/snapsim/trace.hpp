#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "snapsim/event_log.hpp"
#include "snapsim/snapshot_types.hpp"

namespace snapsim {

// A trace file read back in: enough to re-run the consistency check offline.
struct ParsedTrace {
    EventLog log;
    GlobalSnapshot snapshot;
    std::vector<RecordingWindow> windows;
};

// Parses the line format the simulation emits (SEND / DELIVER / RECORD /
// WINDOW / CHANNELSTATE). IoError on unreadable files or malformed lines.
ParsedTrace parse_trace(std::istream& in);
ParsedTrace parse_trace_file(const std::filesystem::path& path);

} // namespace snapsim
