package capture;

import android.graphics.Bitmap;
import android.view.View;

public class SnapshotHelper {
    public Bitmap grab(View view) {
        view.buildDrawingCache();
        return view.getDrawingCache();
    }
}
