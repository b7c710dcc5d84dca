#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fgfrft/commands.hpp"
#include "fgfrft/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

void add_common(CLI::App* cmd, std::uint64_t& seed, std::uint64_t& budget, bool& quiet) {
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--memory-budget", budget, "Power-cache memory budget in bytes");
    cmd->add_flag("--quiet", quiet, "Suppress progress output");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast graph fractional Fourier transform toolkit"};
    app.set_version_flag("--version", std::string(fgfrft::kVersion));
    app.require_subcommand(1);

    fgfrft::cli::SweepOptions sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Accuracy sweep over (N, alpha, L)");
    sweep_cmd->add_option("--n-list", sweep.n_list, "Node counts")->delimiter(',');
    sweep_cmd->add_option("--alpha-list", sweep.alpha_list, "Transform orders")->delimiter(',');
    sweep_cmd->add_option("--l-list", sweep.l_list, "Truncation orders")->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds, one Haar draw each")->delimiter(',');
    sweep_cmd->add_option("--out", sweep.out, "Output prefix");
    sweep_cmd->add_option("--memory-budget", sweep.memory_budget, "Power-cache memory budget in bytes");
    sweep_cmd->add_flag("--quiet", sweep.quiet, "Suppress progress output");

    fgfrft::cli::BenchOptions bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Online construction timing, fast vs exact");
    bench_cmd->add_option("--n-list", bench.n_list, "Node counts")->delimiter(',');
    bench_cmd->add_option("--l", bench.l, "Truncation order");
    bench_cmd->add_option("--repeats", bench.repeats, "Timed repeats (median reported)");
    bench_cmd->add_option("--warmups", bench.warmups, "Discarded warmup rounds");
    bench_cmd->add_option("--alpha", bench.alpha, "Order used for timed builds");
    bench_cmd->add_flag("--haar", bench.haar, "Draw Haar matrices instead of synthetic spectra");
    bench_cmd->add_option("--out", bench.out, "Output prefix");
    add_common(bench_cmd, bench.seed, bench.memory_budget, bench.quiet);

    fgfrft::cli::LearnOrderOptions learn;
    CLI::App* learn_cmd = app.add_subcommand("learn-order", "Cascaded transform-order learning");
    learn_cmd->add_option("--k-list", learn.k_list, "Network depths")->delimiter(',');
    learn_cmd->add_option("--k", learn.k_list, "Alias for --k-list")->delimiter(',');
    learn_cmd->add_option("--target", learn.target, "Target total order");
    learn_cmd->add_option("--init", learn.init, "Initial order per layer");
    learn_cmd->add_option("--lr", learn.lr, "Adam learning rate");
    learn_cmd->add_option("--epochs", learn.epochs, "Training epochs");
    learn_cmd->add_option("--n", learn.n, "Node count of the Haar test matrix");
    learn_cmd->add_option("--l", learn.l, "Truncation order (fast backend)");
    learn_cmd->add_option("--backend", learn.backend, "fast|exact|both");
    learn_cmd->add_option("--out", learn.out, "Output prefix");
    add_common(learn_cmd, learn.seed, learn.memory_budget, learn.quiet);

    fgfrft::cli::DenoiseImageOptions dimg;
    CLI::App* dimg_cmd = app.add_subcommand("denoise-image", "Patchwise image denoising (PGM P5)");
    dimg_cmd->add_option("--input", dimg.input, "8-bit binary PGM input")->required();
    dimg_cmd->add_option("--sigma", dimg.sigma, "Gaussian noise standard deviation");
    dimg_cmd->add_option("--epochs", dimg.epochs, "Adam epochs per patch");
    dimg_cmd->add_option("--l", dimg.l, "Truncation order");
    dimg_cmd->add_option("--patch", dimg.patch, "Patch size (image must divide evenly)");
    dimg_cmd->add_option("--alpha-init", dimg.alpha_init, "Initial transform order");
    dimg_cmd->add_option("--lr", dimg.lr, "Adam learning rate");
    dimg_cmd->add_option("--backend", dimg.backend, "fast|exact");
    dimg_cmd->add_option("--norm", dimg.norm, "laplacian|normalized|adjacency");
    dimg_cmd->add_flag("--loss-on-real", dimg.loss_on_real, "Penalize only the real part");
    dimg_cmd->add_flag("--check-margin", dimg.check_margin,
                       "Compute the phase margin even on the fast backend (extra eigensolve)");
    dimg_cmd->add_flag("--csv-only", dimg.csv_only, "Skip the denoised PGM artifact");
    dimg_cmd->add_option("--out", dimg.out, "Output prefix");
    add_common(dimg_cmd, dimg.seed, dimg.memory_budget, dimg.quiet);

    fgfrft::cli::DenoiseCloudOptions dcloud;
    CLI::App* dcloud_cmd = app.add_subcommand("denoise-cloud", "Batched point-cloud denoising (ASCII XYZ)");
    dcloud_cmd->add_option("--input", dcloud.input, "ASCII XYZ input")->required();
    dcloud_cmd->add_option("--k", dcloud.k, "Nearest-neighbor count");
    dcloud_cmd->add_option("--batch", dcloud.batch, "Batch size in points");
    dcloud_cmd->add_option("--sigma", dcloud.sigma, "Gaussian noise standard deviation");
    dcloud_cmd->add_option("--epochs", dcloud.epochs, "Adam epochs per batch");
    dcloud_cmd->add_option("--l", dcloud.l, "Truncation order");
    dcloud_cmd->add_option("--alpha-init", dcloud.alpha_init, "Initial transform order");
    dcloud_cmd->add_option("--lr", dcloud.lr, "Adam learning rate");
    dcloud_cmd->add_option("--voxel", dcloud.voxel, "Voxel size for downsampling (0 = off)");
    dcloud_cmd->add_option("--peak", dcloud.peak, "PSNR peak override (0 = clean-range convention)");
    dcloud_cmd->add_option("--backend", dcloud.backend, "fast|exact");
    dcloud_cmd->add_option("--norm", dcloud.norm, "laplacian|normalized|adjacency");
    dcloud_cmd->add_option("--graph-from", dcloud.graph_from, "Build graphs from noisy|clean coordinates");
    dcloud_cmd->add_flag("--loss-on-real", dcloud.loss_on_real, "Penalize only the real part");
    dcloud_cmd->add_flag("--csv-only", dcloud.csv_only, "Skip the denoised XYZ artifact");
    dcloud_cmd->add_option("--out", dcloud.out, "Output prefix");
    add_common(dcloud_cmd, dcloud.seed, dcloud.memory_budget, dcloud.quiet);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sweep_cmd->parsed()) fgfrft::cli::cmd_sweep(sweep);
        if (bench_cmd->parsed()) fgfrft::cli::cmd_bench(bench);
        if (learn_cmd->parsed()) fgfrft::cli::cmd_learn_order(learn);
        if (dimg_cmd->parsed()) fgfrft::cli::cmd_denoise_image(dimg);
        if (dcloud_cmd->parsed()) fgfrft::cli::cmd_denoise_cloud(dcloud);
    } catch (const fgfrft::parameter_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fgfrft::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fgfrft::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
