#include "threadpool.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <vector>

namespace mpdcnn {

namespace {

class Pool {
public:
    explicit Pool(int workers) {
        threads_.reserve(static_cast<size_t>(workers));
        for (int i = 1; i <= workers; ++i)
            threads_.emplace_back([this, i] { worker_loop(i); });
    }

    ~Pool() {
        {
            std::unique_lock<std::mutex> lock(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    int width() const { return static_cast<int>(threads_.size()) + 1; }

    void run(int64_t n, const std::function<void(int64_t, int64_t)>& fn) {
        const int w = width();
        const int64_t chunk = (n + w - 1) / w;
        {
            std::unique_lock<std::mutex> lock(mu_);
            fn_ = &fn;
            n_ = n;
            chunk_ = chunk;
            pending_ = static_cast<int>(threads_.size());
            ++generation_;
        }
        cv_.notify_all();
        fn(0, std::min<int64_t>(chunk, n));  // chunk 0 on the calling thread
        std::unique_lock<std::mutex> lock(mu_);
        done_cv_.wait(lock, [this] { return pending_ == 0; });
        fn_ = nullptr;
    }

private:
    void worker_loop(int index) {
        uint64_t seen = 0;
        for (;;) {
            const std::function<void(int64_t, int64_t)>* fn;
            int64_t begin, end;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                fn = fn_;
                begin = std::min<int64_t>(static_cast<int64_t>(index) * chunk_, n_);
                end = std::min<int64_t>(begin + chunk_, n_);
            }
            if (begin < end) (*fn)(begin, end);
            {
                std::unique_lock<std::mutex> lock(mu_);
                if (--pending_ == 0) done_cv_.notify_one();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_, done_cv_;
    const std::function<void(int64_t, int64_t)>* fn_ = nullptr;
    int64_t n_ = 0, chunk_ = 0;
    int pending_ = 0;
    uint64_t generation_ = 0;
    bool stop_ = false;
};

std::mutex g_pool_mu;
Pool* g_pool = nullptr;
int g_requested = 0;

int resolved_width() {
    if (g_requested > 0) return g_requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

Pool& pool() {
    if (!g_pool) g_pool = new Pool(resolved_width() - 1);
    return *g_pool;
}

thread_local bool tl_inside_parallel = false;

}  // namespace

void set_num_threads(int n) {
    std::unique_lock<std::mutex> lock(g_pool_mu);
    g_requested = n;
    if (g_pool && g_pool->width() != resolved_width()) {
        delete g_pool;
        g_pool = nullptr;
    }
}

int num_threads() {
    std::unique_lock<std::mutex> lock(g_pool_mu);
    return resolved_width();
}

void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn) {
    if (n <= 0) return;
    if (tl_inside_parallel) {  // no nesting; inner loops run sequentially
        fn(0, n);
        return;
    }
    Pool* p;
    {
        std::unique_lock<std::mutex> lock(g_pool_mu);
        p = &pool();
    }
    if (p->width() == 1 || n == 1) {
        fn(0, n);
        return;
    }
    tl_inside_parallel = true;
    p->run(n, [&fn](int64_t b, int64_t e) {
        tl_inside_parallel = true;
        fn(b, e);
        tl_inside_parallel = false;
    });
    tl_inside_parallel = false;
}

}  // namespace mpdcnn
