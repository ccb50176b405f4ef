#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "dh/annotate/pdf_text.hpp"
#include "dh/annotate/renderer.hpp"
#include "dh/core/error.hpp"
#include "dh/core/fsutil.hpp"
#include "dh/core/png.hpp"

namespace dh::annotate {

namespace {

namespace stdfs = std::filesystem;

enum class RunStatus { Exited, Crashed, TimedOut };

struct RunOutcome {
    RunStatus status = RunStatus::Crashed;
    int exit_code = -1;
};

RunOutcome run_command(const std::string& cmd, int timeout_seconds) {
    RunOutcome out;
    pid_t pid = fork();
    if (pid < 0) return out;
    if (pid == 0) {
        execl("/bin/sh", "sh", "-c", cmd.c_str(), nullptr);
        _exit(127);
    }
    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_seconds);
    for (;;) {
        int status = 0;
        pid_t done = waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            if (WIFEXITED(status)) {
                out.status = RunStatus::Exited;
                out.exit_code = WEXITSTATUS(status);
            } else {
                out.status = RunStatus::Crashed;
            }
            return out;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            out.status = RunStatus::TimedOut;
            return out;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
}

std::string substitute(std::string templ, const std::string& key, const std::string& value) {
    std::size_t at;
    while ((at = templ.find(key)) != std::string::npos) templ.replace(at, key.size(), value);
    return templ;
}

class ExternalRenderer final : public Renderer {
public:
    explicit ExternalRenderer(ExternalRendererConfig config) : config_(std::move(config)) {}

    RenderResult render(const Bytes& container_bytes, const RenderOptions& options) override {
        RenderResult result;
        static std::atomic<unsigned> counter{0};
        stdfs::path work = stdfs::temp_directory_path() /
                           ("docharvest-render-" + std::to_string(getpid()) + "-" +
                            std::to_string(counter.fetch_add(1)));
        stdfs::create_directories(work);
        struct Cleanup {
            stdfs::path dir;
            ~Cleanup() {
                std::error_code ec;
                stdfs::remove_all(dir, ec);
            }
        } cleanup{work};

        stdfs::path input = work / "input.docx";
        fs::write_file(input, BytesView(container_bytes));

        std::string convert = substitute(config_.convert_command, "{in}", input.string());
        convert = substitute(convert, "{outdir}", work.string());
        convert = substitute(convert, "{dpi}", std::to_string(options.dpi));
        RunOutcome conv = run_command(convert, options.timeout_seconds);
        if (conv.status == RunStatus::TimedOut) {
            result.status = RenderStatus::Timeout;
            result.detail = "converter timed out";
            return result;
        }
        if (conv.status != RunStatus::Exited || conv.exit_code != 0) {
            result.status = RenderStatus::Crashed;
            result.detail = "converter exited abnormally";
            return result;
        }
        stdfs::path pdf_path;
        for (const auto& entry : stdfs::directory_iterator(work))
            if (entry.path().extension() == ".pdf") pdf_path = entry.path();
        if (pdf_path.empty()) {
            result.status = RenderStatus::Crashed;
            result.detail = "no PDF produced";
            return result;
        }
        result.pdf = fs::read_file(pdf_path);
        result.page_count = pdf_page_count(result.pdf);
        if (result.page_count > options.max_pages) {
            result.status = RenderStatus::TooManyPages;
            result.detail = std::to_string(result.page_count) + " pages";
            return result;
        }

        std::string raster = substitute(config_.raster_command, "{in}", pdf_path.string());
        raster = substitute(raster, "{outdir}", work.string());
        raster = substitute(raster, "{dpi}", std::to_string(options.dpi));
        RunOutcome rast = run_command(raster, options.timeout_seconds);
        if (rast.status == RunStatus::TimedOut) {
            result.status = RenderStatus::Timeout;
            result.detail = "rasterizer timed out";
            return result;
        }
        if (rast.status != RunStatus::Exited || rast.exit_code != 0) {
            result.status = RenderStatus::Crashed;
            result.detail = "rasterizer exited abnormally";
            return result;
        }
        std::vector<stdfs::path> images;
        for (const auto& entry : stdfs::directory_iterator(work))
            if (entry.path().extension() == ".png") images.push_back(entry.path());
        std::sort(images.begin(), images.end());
        for (const auto& path : images) {
            try {
                result.pages.push_back(decode_png(fs::read_file(path)));
            } catch (const Error& e) {
                result.status = RenderStatus::Crashed;
                result.detail = std::string("bad page image: ") + e.what();
                return result;
            }
        }
        if (result.pages.empty()) {
            result.status = RenderStatus::Crashed;
            result.detail = "no page images produced";
            return result;
        }
        if (result.page_count == 0) result.page_count = int(result.pages.size());
        result.status = RenderStatus::Ok;
        return result;
    }

private:
    ExternalRendererConfig config_;
};

}  // namespace

std::unique_ptr<Renderer> make_external_renderer(const ExternalRendererConfig& config) {
    return std::make_unique<ExternalRenderer>(config);
}

}  // namespace dh::annotate
