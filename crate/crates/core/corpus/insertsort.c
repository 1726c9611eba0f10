int insertsort(int n) {
    int a[n];
    for (int i = 0; i < n; i++) {
        a[i] = (i * 1103 + 345) % 1000;
    }
    for (int i = 1; i < n; i++) {
        int key = a[i];
        int j = i - 1;
        while (j >= 0 && a[j] > key) {
            a[j + 1] = a[j];
            j--;
        }
        a[j + 1] = key;
    }
    int first = 0;
    if (n > 0) {
        first = a[0];
    }
    return first;
}
