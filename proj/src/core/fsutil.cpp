#include "dh/core/fsutil.hpp"

#include <algorithm>
#include <fstream>

#include "dh/core/error.hpp"

namespace dh::fs {

Bytes read_file(const stdfs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    auto size = in.tellg();
    if (size < 0) {
        // Non-seekable (pipe, fifo): drain in chunks.
        in.clear();
        Bytes data;
        char chunk[1 << 16];
        while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0)
            data.insert(data.end(), chunk, chunk + in.gcount());
        return data;
    }
    in.seekg(0);
    Bytes data(static_cast<std::size_t>(size));
    if (size > 0) in.read(reinterpret_cast<char*>(data.data()), size);
    if (!in) throw Error("short read on " + path.string());
    return data;
}

std::optional<Bytes> try_read_file(const stdfs::path& path) {
    std::error_code ec;
    if (!stdfs::exists(path, ec) || ec) return std::nullopt;
    return read_file(path);
}

std::string read_text_file(const stdfs::path& path) {
    Bytes b = read_file(path);
    return std::string(b.begin(), b.end());
}

void write_file(const stdfs::path& path, BytesView data) {
    if (path.has_parent_path()) stdfs::create_directories(path.parent_path());
    stdfs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
        if (!out) throw Error("short write on " + tmp.string());
    }
    stdfs::rename(tmp, path);
}

void write_file(const stdfs::path& path, std::string_view data) {
    write_file(path, BytesView(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::vector<std::string> read_lines(const stdfs::path& path) {
    std::vector<std::string> lines;
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> list_files(const stdfs::path& dir) {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& e : stdfs::directory_iterator(dir, ec))
        if (e.is_regular_file()) out.push_back(e.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace dh::fs
