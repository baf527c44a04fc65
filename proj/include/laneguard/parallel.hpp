#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace laneguard {

// Persistent worker pool with a deterministic work split: parallel_chunks
// hands out fixed half-open chunks, so the set of chunks (and therefore every
// floating-point partial result) is independent of how threads get scheduled.
// Callers that reduce across chunks must do so serially in chunk order.
//
// The submitting thread participates; a pool of W workers runs W+1 lanes.
// Not reentrant: one parallel region at a time, no nesting.
class ThreadPool {
  public:
    explicit ThreadPool(unsigned workers) {
        workers_.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool() {
        {
            std::lock_guard lock(mu_);
            stopping_ = true;
        }
        cv_.notify_all();
        for (auto& w : workers_) w.join();
    }

    std::size_t lane_count() const { return workers_.size() + 1; }

    // fn(chunk_index, begin, end) over [0, n) in chunks of chunk_size.
    void parallel_chunks(std::size_t n, std::size_t chunk_size,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
        if (n == 0) return;
        if (chunk_size < 1) chunk_size = 1;
        const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
        if (n_chunks == 1 || workers_.empty()) {
            for (std::size_t c = 0; c < n_chunks; ++c) {
                fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
            }
            return;
        }

        std::unique_lock lock(mu_);
        job_ = &fn;
        job_n_ = n;
        job_chunk_ = chunk_size;
        job_next_ = 0;
        job_pending_ = n_chunks;
        ++job_epoch_;
        cv_.notify_all();
        run_chunks(lock);
        done_cv_.wait(lock, [this] { return job_pending_ == 0; });
        job_ = nullptr;
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                      std::size_t grain = 1) {
        parallel_chunks(n, grain, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) fn(i);
        });
    }

    // Process-wide pool for the numeric kernels; sized so that the submitter
    // plus workers fill the machine.
    static ThreadPool& global() {
        static ThreadPool pool(std::thread::hardware_concurrency() > 1
                                   ? std::thread::hardware_concurrency() - 1
                                   : 0);
        return pool;
    }

  private:
    void worker_loop() {
        std::unique_lock lock(mu_);
        std::uint64_t seen = 0;
        for (;;) {
            cv_.wait(lock, [&] { return stopping_ || (job_ && job_epoch_ != seen); });
            if (stopping_) return;
            seen = job_epoch_;
            run_chunks(lock);
        }
    }

    // Pops chunk indices until the job is drained. Called with lock held.
    void run_chunks(std::unique_lock<std::mutex>& lock) {
        const auto* fn = job_;
        const std::size_t n = job_n_, chunk = job_chunk_;
        const std::size_t n_chunks = (n + chunk - 1) / chunk;
        while (job_next_ < n_chunks) {
            const std::size_t c = job_next_++;
            lock.unlock();
            (*fn)(c, c * chunk, std::min(n, (c + 1) * chunk));
            lock.lock();
            if (--job_pending_ == 0) done_cv_.notify_all();
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t, std::size_t, std::size_t)>* job_ = nullptr;
    std::size_t job_n_ = 0, job_chunk_ = 1, job_next_ = 0, job_pending_ = 0;
    std::uint64_t job_epoch_ = 0;
    bool stopping_ = false;
};

}  // namespace laneguard
