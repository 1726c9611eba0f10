#include <stdio.h>

// y = A x for an n*n matrix stored row-major, followed by a prefix sum
// over y. Both phases touch memory, the second only when `scan` is set.
void matvec(int n, int scan) {
    int a[n * n];
    int x[n];
    int y[n];
    for (int i = 0; i < n * n; i++) {
        a[i] = i % 7 - 3;
    }
    for (int i = 0; i < n; i++) {
        x[i] = i + 1;
    }
    for (int i = 0; i < n; i++) {
        int acc = 0;
        for (int j = 0; j < n; j++) {
            acc += a[i * n + j] * x[j];
        }
        y[i] = acc;
    }
    if (scan > 0) {
        for (int i = 1; i < n; i++) {
            y[i] += y[i - 1];
        }
    }
    printf("%d\n", y[n - 1]);
}
