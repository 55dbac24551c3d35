#include <random>
#include <chrono>
#include <iostream>
#include "lefk/shifts.hpp"
using namespace lefk;
using Clock = std::chrono::steady_clock;
double secs(Clock::time_point a, Clock::time_point b){ return std::chrono::duration<double>(b-a).count(); }
int main(){
    FixedComponentDatum c; c.name="t";
    c.tangent[3]=2; c.vbundle[3]=2; c.v0_rank=2;
    PropCheckOptions opt; opt.q_max = Rat(2); opt.g_halfwidth = 12;
    auto t0 = Clock::now();
    Verdict v = check_prop_3_1(c, 2, 1, opt);
    auto t1 = Clock::now();
    std::cout << "check_prop_3_1 p=2 i=1: " << (v.pass?"PASS":"FAIL") << " in " << secs(t0,t1) << "s\n";
}
