package ui;

import android.content.Context;
import android.widget.TextView;

public class LabelFactory {
    public TextView make(Context context) {
        TextView label = new TextView(context);
        label.setTextAppearance(R.style.Caption);
        return label;
    }
}
