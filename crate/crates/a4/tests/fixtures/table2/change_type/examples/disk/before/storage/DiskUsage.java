package storage;

import android.os.StatFs;

public class DiskUsage {
    public long free(String path) {
        StatFs stat = new StatFs(path);
        int block = stat.getBlockSize();
        return (long) block * stat.getAvailableBlocks();
    }
}
