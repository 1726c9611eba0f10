// Fill an array, then fold it twice.
int array(int n) {
    int a[n];
    int sum = 0;
    int odd = 0;
    for (int i = 0; i < n; i++) {
        a[i] = (i * 1103 + 345) % 1000;
    }
    for (int i = 0; i < n; i++) {
        sum = sum + a[i];
    }
    for (int i = 1; i < n; i = i + 2) {
        odd = odd + a[i];
    }
    return sum - odd;
}
