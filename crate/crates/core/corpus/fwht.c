// In-place fast Walsh-Hadamard transform of a vector of length 2^k, the
// integer cousin of the radix-2 FFT butterfly.
int fwht(int k) {
    int n = 1;
    for (int i = 0; i < k; i++) {
        n = n * 2;
    }
    int a[n];
    for (int i = 0; i < n; i++) {
        a[i] = (i * 37 + 11) % 19;
    }
    for (int len = 1; len < n; len = len * 2) {
        for (int i = 0; i < n; i = i + 2 * len) {
            for (int j = i; j < i + len; j++) {
                int u = a[j];
                int v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
        }
    }
    return a[0];
}
