#include <lefk/toml_lite.hpp>
int main(){}
