int bubble(int n) {
    int a[n];
    for (int i = 0; i < n; i++) {
        a[i] = (i * 1103 + 345) % 1000;
    }
    for (int i = 0; i < n - 1; i++) {
        for (int j = 0; j < n - 1 - i; j++) {
            if (a[j] > a[j + 1]) {
                int t = a[j];
                a[j] = a[j + 1];
                a[j + 1] = t;
            }
        }
    }
    int first = 0;
    if (n > 0) {
        first = a[0];
    }
    return first;
}
