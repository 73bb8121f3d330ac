package icons;

import android.content.Context;
import android.content.res.Resources;
import android.graphics.drawable.Drawable;

public class IconLoader {
    private final Context context;

    public IconLoader(Context context) {
        this.context = context;
    }

    public Drawable load(int id) {
        Resources res = context.getResources();
        Drawable icon = res.getDrawable(id);
        return icon;
    }
}
