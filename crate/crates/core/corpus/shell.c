int shell(int n) {
    int a[n];
    for (int i = 0; i < n; i++) {
        a[i] = (i * 1103 + 345) % 1000;
    }
    for (int gap = n / 2; gap > 0; gap = gap / 2) {
        for (int i = gap; i < n; i++) {
            int t = a[i];
            int j = i;
            while (j >= gap && a[j - gap] > t) {
                a[j] = a[j - gap];
                j = j - gap;
            }
            a[j] = t;
        }
    }
    int first = 0;
    if (n > 0) {
        first = a[0];
    }
    return first;
}
