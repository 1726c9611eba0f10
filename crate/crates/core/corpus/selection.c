int min_index(int a[], int from, int n) {
    int best = from;
    for (int i = from + 1; i < n; i++) {
        if (a[i] < a[best]) {
            best = i;
        }
    }
    return best;
}

int selection(int n) {
    int a[n];
    for (int i = 0; i < n; i++) {
        a[i] = (i * 1103 + 345) % 1000;
    }
    for (int i = 0; i < n - 1; i++) {
        int m = min_index(a, i, n);
        if (m != i) {
            int t = a[i];
            a[i] = a[m];
            a[m] = t;
        }
    }
    int first = 0;
    if (n > 0) {
        first = a[0];
    }
    return first;
}
