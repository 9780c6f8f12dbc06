#include <cstdio>
int main(){ std::puts("gbc cli placeholder"); return 0; }
